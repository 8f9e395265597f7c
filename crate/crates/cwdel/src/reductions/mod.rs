//! Instance compilers: SAT to deletion-to-r-colorable (dense and sparse
//! settings), hitting set to vertex cover with triangle paths, the max-cut
//! and clique-free corollaries, and the (total) dominating set constructions.
//!
//! Shared input types (CNF formulas, hitting set instances) and the common
//! output shape live here; the per-construction code sits in submodules.

pub mod ds;
pub mod dtc;
pub mod phi;
pub mod vc;

use num_bigint::BigUint;
use std::io::{BufRead, Write};

use crate::graph::{Graph, TreeDecomposition};

/// CNF formula with nonzero integer literals, DIMACS style.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: u32, clauses: Vec<Vec<i32>>) -> Result<Self, String> {
        let f = CnfFormula { num_vars, clauses };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), String> {
        for (i, cl) in self.clauses.iter().enumerate() {
            if cl.is_empty() {
                return Err(format!("clause {} is empty", i + 1));
            }
            for &lit in cl {
                if lit == 0 || lit.unsigned_abs() > self.num_vars {
                    return Err(format!("clause {} has bad literal {}", i + 1, lit));
                }
            }
        }
        Ok(())
    }

    /// Maximum clause width.
    pub fn q(&self) -> usize {
        self.clauses.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Evaluates under an assignment given as one bool per variable.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        assert_eq!(assignment.len(), self.num_vars as usize);
        self.clauses.iter().all(|cl| {
            cl.iter().any(|&lit| {
                let val = assignment[(lit.unsigned_abs() - 1) as usize];
                if lit > 0 {
                    val
                } else {
                    !val
                }
            })
        })
    }

    pub fn parse_dimacs<R: BufRead>(input: R) -> Result<Self, String> {
        let mut num_vars: Option<u32> = None;
        let mut expect_clauses = 0usize;
        let mut clauses: Vec<Vec<i32>> = Vec::new();
        let mut current: Vec<i32> = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line.map_err(|e| e.to_string())?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('p') {
                let mut it = line.split_whitespace();
                it.next();
                if it.next() != Some("cnf") || num_vars.is_some() {
                    return Err(format!("line {}: bad problem line", lineno + 1));
                }
                num_vars = Some(
                    it.next()
                        .and_then(|t| t.parse().ok())
                        .ok_or(format!("line {}: bad variable count", lineno + 1))?,
                );
                expect_clauses = it
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or(format!("line {}: bad clause count", lineno + 1))?;
                continue;
            }
            if num_vars.is_none() {
                return Err(format!("line {}: clause before problem line", lineno + 1));
            }
            for tok in line.split_whitespace() {
                let lit: i32 =
                    tok.parse().map_err(|_| format!("line {}: bad literal '{}'", lineno + 1, tok))?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    current.push(lit);
                }
            }
        }
        if !current.is_empty() {
            return Err("last clause not 0-terminated".into());
        }
        let f = CnfFormula { num_vars: num_vars.ok_or("missing 'p cnf' line")?, clauses };
        if f.clauses.len() != expect_clauses {
            return Err(format!(
                "problem line claims {} clauses, file has {}",
                expect_clauses,
                f.clauses.len()
            ));
        }
        f.validate()?;
        Ok(f)
    }

    pub fn write_dimacs<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len())?;
        for cl in &self.clauses {
            for lit in cl {
                write!(out, "{} ", lit)?;
            }
            writeln!(out, "0")?;
        }
        Ok(())
    }
}

/// Hitting set instance over universe 0..universe-1 with a deletion budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HittingSetInstance {
    pub universe: u32,
    pub sets: Vec<Vec<u32>>,
    pub budget: u32,
}

impl HittingSetInstance {
    pub fn new(universe: u32, sets: Vec<Vec<u32>>, budget: u32) -> Result<Self, String> {
        let h = HittingSetInstance { universe, sets, budget };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<(), String> {
        for (i, s) in self.sets.iter().enumerate() {
            if s.is_empty() {
                return Err(format!("set {} is empty", i + 1));
            }
            for &e in s {
                if e >= self.universe {
                    return Err(format!("set {} has element {} out of range", i + 1, e + 1));
                }
            }
        }
        Ok(())
    }

    pub fn q(&self) -> usize {
        self.sets.iter().map(|s| s.len()).max().unwrap_or(0)
    }

    pub fn is_hit_by(&self, h: &[u32]) -> bool {
        self.sets.iter().all(|s| s.iter().any(|e| h.contains(e)))
    }

    /// Text format: `u <universe> <sets> <budget>` then one line of
    /// space-separated 1-indexed elements per set.
    pub fn parse<R: BufRead>(input: R) -> Result<Self, String> {
        let mut header: Option<(u32, usize, u32)> = None;
        let mut sets: Vec<Vec<u32>> = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line.map_err(|e| e.to_string())?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("u ") {
                if header.is_some() {
                    return Err(format!("line {}: duplicate header", lineno + 1));
                }
                let nums: Vec<&str> = rest.split_whitespace().collect();
                if nums.len() != 3 {
                    return Err(format!("line {}: expected 'u <n> <m> <t>'", lineno + 1));
                }
                let n = nums[0].parse().map_err(|_| format!("line {}: bad n", lineno + 1))?;
                let m = nums[1].parse().map_err(|_| format!("line {}: bad m", lineno + 1))?;
                let t = nums[2].parse().map_err(|_| format!("line {}: bad t", lineno + 1))?;
                header = Some((n, m, t));
                continue;
            }
            if header.is_none() {
                return Err(format!("line {}: set before header", lineno + 1));
            }
            let mut set = Vec::new();
            for tok in line.split_whitespace() {
                let e: u32 =
                    tok.parse().map_err(|_| format!("line {}: bad element '{}'", lineno + 1, tok))?;
                if e == 0 {
                    return Err(format!("line {}: elements are 1-indexed", lineno + 1));
                }
                set.push(e - 1);
            }
            sets.push(set);
        }
        let (n, m, t) = header.ok_or("missing 'u' header")?;
        if sets.len() != m {
            return Err(format!("header claims {} sets, file has {}", m, sets.len()));
        }
        HittingSetInstance::new(n, sets, t)
    }

    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "u {} {} {}", self.universe, self.sets.len(), self.budget)?;
        for s in &self.sets {
            let line: Vec<String> = s.iter().map(|e| (e + 1).to_string()).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Which of the two SAT reductions an instance came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Setting {
    Dense,
    Sparse,
}

/// Parameters shared by one reduction run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionParams {
    pub r: u8,
    /// variables per group
    pub p0: u32,
    /// number of groups
    pub t: u32,
    /// twinclasses (dense) or vertices (sparse) per group
    pub p: u32,
    /// dense only: twinclasses of level l per group member, l = 0..r
    pub level_counts: Vec<u32>,
}

pub(crate) fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * k)
}

/// Smallest p divisible by 2^r with (2^r)^p (2^r-1)! / (2^{2^r} p^{2^r}) >= 2^{p0},
/// checked in exact integer arithmetic.
pub fn choose_p_dense(p0: u32, r: u8) -> u32 {
    assert!(p0 >= 1 && r >= 2, "need p0 >= 1 and r >= 2");
    let base = 1u32 << r; // 2^r
    let fact = factorial(base - 1);
    let mut p = base;
    loop {
        let lhs = BigUint::from(base).pow(p) * &fact;
        let rhs = (BigUint::from(1u32) << (p0 + base)) * BigUint::from(p).pow(base);
        if lhs >= rhs {
            return p;
        }
        p += base;
    }
}

/// Smallest p divisible by r+1 with (r+1)^p / (p+1) >= 2^{p0}.
pub fn choose_p_sparse(p0: u32, r: u8) -> u32 {
    assert!(p0 >= 1 && r >= 2, "need p0 >= 1 and r >= 2");
    let base = r as u32 + 1;
    let mut p = base;
    loop {
        let lhs = BigUint::from(base).pow(p);
        let rhs = (BigUint::from(1u32) << p0) * BigUint::from(p + 1);
        if lhs >= rhs {
            return p;
        }
        p += base;
    }
}

/// Dense per-level twinclass counts C(r,l) * p / 2^r for l = 0..r.
pub fn dense_level_counts(r: u8, p: u32) -> Vec<u32> {
    let pow = 1u32 << r;
    assert!(p % pow == 0, "p must be divisible by 2^r");
    (0..=r as u32)
        .map(|l| {
            let mut binom = 1u64;
            for i in 0..l as u64 {
                binom = binom * (r as u64 - i) / (i + 1);
            }
            (binom as u32) * (p / pow)
        })
        .collect()
}

/// One certified packing piece: a vertex set whose induced subgraph needs at
/// least `claim` deletions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingEntry {
    pub claim: u32,
    pub verts: Vec<u32>,
}

/// Group-local decoder table: assignment index (p0 bits) to member index of
/// the group's canonical enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaTable {
    pub bits: u32,
    pub map: Vec<u32>,
}

impl KappaTable {
    pub fn identity(bits: u32) -> Self {
        KappaTable { bits, map: (0..1u32 << bits).collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionKind {
    Dense,
    Sparse,
    VertexCover,
}

/// Output of the instance compilers. `witnesses` are per-component
/// decompositions over global vertex ids for everything outside the modulator
/// and central vertices.
#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub kind: ReductionKind,
    pub graph: Graph,
    pub budget: u32,
    /// modulator as twinclass blocks; singletons where classes are trivial
    pub modulator: Vec<Vec<u32>>,
    pub packing: Vec<PackingEntry>,
    pub cost_packing: u32,
    /// central clique F (empty for the vertex cover reduction)
    pub central: Vec<u32>,
    pub kappas: Vec<KappaTable>,
    pub witnesses: Vec<TreeDecomposition>,
    /// width every witness must stay within (r, or 2 for vertex cover)
    pub witness_width: u32,
    pub params: Option<ReductionParams>,
    /// construction layout needed by forward_solution / extract_hitting_set
    pub dtc: Option<Box<dtc::DtcLayout>>,
    pub vc: Option<Box<vc::VcLayout>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_roundtrip() {
        let f = CnfFormula::new(3, vec![vec![1, -2], vec![2, 3, -1]]).unwrap();
        let mut buf = Vec::new();
        f.write_dimacs(&mut buf).unwrap();
        let back = CnfFormula::parse_dimacs(buf.as_slice()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.q(), 3);
    }

    #[test]
    fn dimacs_rejects_malformed() {
        assert!(CnfFormula::parse_dimacs("p cnf 2 1\n1 0\n2 0\n".as_bytes()).is_err());
        assert!(CnfFormula::parse_dimacs("1 0\n".as_bytes()).is_err());
        assert!(CnfFormula::parse_dimacs("p cnf 1 1\n2 0\n".as_bytes()).is_err());
        assert!(CnfFormula::parse_dimacs("p cnf 1 1\n1\n".as_bytes()).is_err());
        assert!(CnfFormula::new(2, vec![vec![]]).is_err());
    }

    #[test]
    fn cnf_evaluation() {
        let f = CnfFormula::new(2, vec![vec![1, 2], vec![-1, -2]]).unwrap();
        assert!(f.is_satisfied_by(&[true, false]));
        assert!(!f.is_satisfied_by(&[true, true]));
        assert!(!f.is_satisfied_by(&[false, false]));
    }

    #[test]
    fn hitting_set_roundtrip() {
        let h = HittingSetInstance::new(4, vec![vec![0, 1], vec![2, 3], vec![1, 2]], 2).unwrap();
        let mut buf = Vec::new();
        h.write(&mut buf).unwrap();
        let back = HittingSetInstance::parse(buf.as_slice()).unwrap();
        assert_eq!(back, h);
        assert!(h.is_hit_by(&[1, 2]));
        assert!(!h.is_hit_by(&[1]));
    }

    #[test]
    fn hitting_set_rejects_malformed() {
        assert!(HittingSetInstance::parse("u 2 1 1\n3\n".as_bytes()).is_err());
        assert!(HittingSetInstance::parse("u 2 2 1\n1\n".as_bytes()).is_err());
        assert!(HittingSetInstance::new(2, vec![vec![]], 0).is_err());
    }

    #[test]
    fn p_selection_small_values() {
        assert_eq!(choose_p_dense(1, 2), 8);
        assert_eq!(choose_p_sparse(1, 2), 3);
        assert_eq!(choose_p_sparse(2, 2), 3);
        assert_eq!(choose_p_sparse(1, 3), 4);
    }

    #[test]
    fn p_selection_divisibility() {
        for p0 in 1..=6 {
            for r in 2..=3u8 {
                assert_eq!(choose_p_dense(p0, r) % (1 << r), 0);
                assert_eq!(choose_p_sparse(p0, r) % (r as u32 + 1), 0);
            }
        }
    }

    #[test]
    fn dense_scan_confirms_smallest_p() {
        // direct scan over p = 4, 8, 12, ... for r = 2 and a few p0
        let check = |p0: u32, p: u32| -> bool {
            let lhs = BigUint::from(4u32).pow(p) * factorial(3);
            let rhs = (BigUint::from(1u32) << (p0 + 4)) * BigUint::from(p).pow(4);
            lhs >= rhs
        };
        for p0 in 1..=8 {
            let p = choose_p_dense(p0, 2);
            assert!(check(p0, p));
            let mut q = 4;
            while q < p {
                assert!(!check(p0, q), "p0={} q={} already satisfies", p0, q);
                q += 4;
            }
        }
    }

    #[test]
    fn level_counts_for_r2_p8() {
        assert_eq!(dense_level_counts(2, 8), vec![2, 4, 2]);
        let c = dense_level_counts(3, 8);
        assert_eq!(c, vec![1, 3, 3, 1]);
        assert_eq!(c.iter().sum::<u32>(), 8);
    }
}
