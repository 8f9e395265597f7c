//! Independent validation of solutions, packings, and compiled instances.
//! Verifiers recompute everything from the raw graph instead of trusting
//! generator bookkeeping, so a bug in a compiler cannot vouch for itself.

use crate::graph::{classify_twinclass, verify_decomposition_on, Graph};
use crate::oracle::{
    min_deletions_r_colorable, DeletionOutcome, ProblemInput, ProblemKind, Solution, DELETED,
};
use crate::reductions::{ReductionInstance, ReductionKind};

/// Pieces above this size are reported as unverified instead of spending
/// unbounded oracle time on them.
pub const CLAIM_ORACLE_CAP: usize = 25;

/// One named check with a failure detail when it did not hold.
#[derive(Clone, Debug)]
pub struct CheckItem {
    pub name: &'static str,
    pub pass: bool,
    /// empty for passing items
    pub detail: String,
}

/// Itemized pass/fail summary; passes iff every item passes.
#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub items: Vec<CheckItem>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    fn add(&mut self, name: &'static str, result: Result<(), String>) {
        match result {
            Ok(()) => self.items.push(CheckItem { name, pass: true, detail: String::new() }),
            Err(detail) => self.items.push(CheckItem { name, pass: false, detail }),
        }
    }

    pub fn item(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.name == name)
    }

    /// One line per item plus a result line, for humans.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for i in &self.items {
            if i.pass {
                out.push_str(&format!("ok   {}\n", i.name));
            } else {
                out.push_str(&format!("FAIL {}: {}\n", i.name, i.detail));
            }
        }
        out.push_str(if self.pass() { "result: pass\n" } else { "result: fail\n" });
        out
    }

    /// key=value lines, one per item plus a final pass flag.
    pub fn render_kv(&self) -> String {
        let mut out = String::new();
        for i in &self.items {
            out.push_str(&format!("{}={}\n", i.name, if i.pass { "ok" } else { "fail" }));
        }
        out.push_str(&format!("pass={}\n", self.pass()));
        out
    }
}

/// Checks a deletion-and-color solution directly against the graph: kept
/// colors stay in 1..=r, no kept edge is monochromatic, and at most b
/// vertices are deleted.
pub fn verify_dtc_solution(g: &Graph, sol: &Solution, r: u8, b: u32) -> VerifyReport {
    let mut rep = VerifyReport::default();
    if sol.n() != g.n() {
        rep.add(
            "shape",
            Err(format!("solution covers {} vertices, graph has {}", sol.n(), g.n())),
        );
        return rep;
    }
    rep.add("shape", Ok(()));

    let bad_color = g.vertices().find(|&v| sol.color(v) > r);
    rep.add(
        "color_range",
        match bad_color {
            None => Ok(()),
            Some(v) => Err(format!("vertex {} has color {} with only {} colors", v, sol.color(v), r)),
        },
    );

    let bad_edge = g
        .edges()
        .find(|&(u, v)| sol.color(u) != DELETED && sol.color(u) == sol.color(v));
    rep.add(
        "edge_condition",
        match bad_edge {
            None => Ok(()),
            Some((u, v)) => {
                Err(format!("edge {{{},{}}} is monochromatic in color {}", u, v, sol.color(u)))
            }
        },
    );

    let cost = sol.cost();
    rep.add(
        "budget",
        if cost <= b {
            Ok(())
        } else {
            Err(format!("solution deletes {} vertices, budget is {}", cost, b))
        },
    );
    rep
}

/// Checks a compiled instance: the packing is a family of disjoint pieces
/// avoiding the modulator, the modulator blocks really are twin sets, the
/// witnesses tile everything outside the modulator within the declared
/// width, and every packing claim is re-proved by the deletion oracle.
pub fn verify_reduction_instance(inst: &ReductionInstance) -> VerifyReport {
    verify_reduction_instance_threaded(inst, 1)
}

/// Same checks, with the per-piece oracle calls spread over `threads`
/// worker threads. The report is identical to the single-threaded one: on
/// multiple claim failures the lowest piece index wins.
pub fn verify_reduction_instance_threaded(inst: &ReductionInstance, threads: usize) -> VerifyReport {
    let g = &inst.graph;
    let n = g.n();
    let mut rep = VerifyReport::default();

    let mut in_piece = vec![false; n];
    rep.add("packing_disjoint", {
        let mut res = Ok(());
        'outer: for (i, piece) in inst.packing.iter().enumerate() {
            for &v in &piece.verts {
                if v as usize >= n {
                    res = Err(format!("piece {} mentions unknown vertex {}", i, v));
                    break 'outer;
                }
                if in_piece[v as usize] {
                    res = Err(format!("vertex {} is in two packing pieces", v));
                    break 'outer;
                }
                in_piece[v as usize] = true;
            }
        }
        res
    });

    let mut in_modulator = vec![false; n];
    for block in &inst.modulator {
        for &v in block {
            if (v as usize) < n {
                in_modulator[v as usize] = true;
            }
        }
    }
    rep.add("packing_avoids_modulator", {
        match (0..n as u32).find(|&v| in_piece[v as usize] && in_modulator[v as usize]) {
            None => Ok(()),
            Some(v) => Err(format!("packing vertex {} sits in the modulator", v)),
        }
    });

    rep.add("modulator_twins", {
        let mut res = Ok(());
        for (i, block) in inst.modulator.iter().enumerate() {
            if let Err(e) = classify_twinclass(g, block) {
                res = Err(format!("modulator block {}: {}", i, e));
                break;
            }
        }
        res
    });

    rep.add("witness_cover", {
        let mut covered = vec![false; n];
        let mut res = Ok(());
        'outer: for (i, w) in inst.witnesses.iter().enumerate() {
            for v in w.covered_vertices() {
                if v as usize >= n {
                    res = Err(format!("witness {} mentions unknown vertex {}", i, v));
                    break 'outer;
                }
                if covered[v as usize] {
                    res = Err(format!("vertex {} is covered by two witnesses", v));
                    break 'outer;
                }
                covered[v as usize] = true;
            }
        }
        if res.is_ok() {
            res = match (0..n as u32).find(|&v| covered[v as usize] != !in_modulator[v as usize]) {
                None => Ok(()),
                Some(v) if in_modulator[v as usize] => {
                    Err(format!("modulator vertex {} appears in a witness", v))
                }
                Some(v) => Err(format!("vertex {} is outside every witness", v)),
            };
        }
        res
    });

    rep.add("witness_valid", {
        let mut res = Ok(());
        for (i, w) in inst.witnesses.iter().enumerate() {
            match verify_decomposition_on(g, w, &w.covered_vertices()) {
                Err(e) => {
                    res = Err(format!("witness {}: {}", i, e));
                    break;
                }
                Ok(width) if width > inst.witness_width => {
                    res =
                        Err(format!("witness {} has width {}, declared {}", i, width, inst.witness_width));
                    break;
                }
                Ok(_) => {}
            }
        }
        res
    });

    rep.add("packing_claims", {
        let r = match inst.kind {
            ReductionKind::VertexCover => Ok(1u8),
            ReductionKind::Dense | ReductionKind::Sparse => inst
                .params
                .as_ref()
                .map(|p| p.r)
                .ok_or_else(|| "instance carries no parameters".to_string()),
        };
        r.and_then(|r| check_packing_claims(inst, r, threads))
    });

    rep.add("cost_sum", {
        let sum: u32 = inst.packing.iter().map(|p| p.claim).sum();
        if sum == inst.cost_packing {
            Ok(())
        } else {
            Err(format!("claims sum to {}, instance declares {}", sum, inst.cost_packing))
        }
    });

    rep
}

fn check_one_claim(g: &Graph, r: u8, i: usize, piece: &crate::reductions::PackingEntry) -> Result<(), String> {
    if piece.claim == 0 {
        return Ok(());
    }
    if piece.verts.len() > CLAIM_ORACLE_CAP {
        return Err(format!(
            "piece {} has {} vertices, above the {}-vertex verification cap",
            i,
            piece.verts.len(),
            CLAIM_ORACLE_CAP
        ));
    }
    let (pg, _) = g.induced(&piece.verts);
    match min_deletions_r_colorable(&pg, r, piece.claim - 1, None) {
        DeletionOutcome::ExceedsCap => Ok(()),
        DeletionOutcome::Solved { cost, .. } => {
            Err(format!("piece {} needs only {} deletions, claims {}", i, cost, piece.claim))
        }
    }
}

fn check_packing_claims(inst: &ReductionInstance, r: u8, threads: usize) -> Result<(), String> {
    let g = &inst.graph;
    if threads <= 1 || inst.packing.len() <= 1 {
        for (i, piece) in inst.packing.iter().enumerate() {
            check_one_claim(g, r, i, piece)?;
        }
        return Ok(());
    }
    let workers = threads.min(inst.packing.len());
    let mut failures: Vec<Option<(usize, String)>> = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|tid| {
                let packing = &inst.packing;
                scope.spawn(move || {
                    let mut first: Option<(usize, String)> = None;
                    for (i, piece) in packing.iter().enumerate().skip(tid).step_by(workers) {
                        if let Err(e) = check_one_claim(g, r, i, piece) {
                            first = Some((i, e));
                            break;
                        }
                    }
                    first
                })
            })
            .collect();
        failures = handles.into_iter().map(|h| h.join().expect("claim worker panicked")).collect();
    });
    // lowest index wins so the report matches the sequential one
    match failures.into_iter().flatten().min_by_key(|(i, _)| *i) {
        None => Ok(()),
        Some((_, e)) => Err(e),
    }
}

fn check_vertex_set(n: usize, witness: &[u32]) -> Result<Vec<bool>, String> {
    let mut in_set = vec![false; n];
    for &v in witness {
        if v as usize >= n {
            return Err(format!("witness mentions unknown vertex {}", v));
        }
        in_set[v as usize] = true;
    }
    Ok(in_set)
}

/// Searches for an r-clique among vertices with `alive` set.
fn find_clique(g: &Graph, r: usize, alive: &[bool]) -> Option<Vec<u32>> {
    fn extend(g: &Graph, r: usize, clique: &mut Vec<u32>, cands: &[u32]) -> bool {
        if clique.len() == r {
            return true;
        }
        for (i, &v) in cands.iter().enumerate() {
            if cands.len() - i + clique.len() < r {
                return false;
            }
            clique.push(v);
            let next: Vec<u32> =
                cands[i + 1..].iter().copied().filter(|&w| g.has_edge(v, w)).collect();
            if extend(g, r, clique, &next) {
                return true;
            }
            clique.pop();
        }
        false
    }
    let cands: Vec<u32> = g.vertices().filter(|&v| alive[v as usize]).collect();
    let mut clique = Vec::new();
    extend(g, r, &mut clique, &cands).then_some(clique)
}

/// Definitional check of a claimed solution, no optimality: the witness set
/// must satisfy the problem's own condition and meet the target (set size
/// at most the target, or cut value at least the target for max cut).
pub fn verify_problem_solution(
    kind: ProblemKind,
    input: &ProblemInput,
    witness: &[u32],
    target: u32,
) -> VerifyReport {
    let mut rep = VerifyReport::default();
    match (kind, input) {
        (ProblemKind::VertexCover, ProblemInput::Graph(g)) => match check_vertex_set(g.n(), witness) {
            Err(e) => rep.add("range", Err(e)),
            Ok(in_set) => {
                rep.add("range", Ok(()));
                rep.add("size", check_size(witness.len(), target));
                rep.add(
                    "cover",
                    match g.edges().find(|&(u, v)| !in_set[u as usize] && !in_set[v as usize]) {
                        None => Ok(()),
                        Some((u, v)) => Err(format!("edge {{{},{}}} is uncovered", u, v)),
                    },
                );
            }
        },
        (ProblemKind::DominatingSet, ProblemInput::Graph(g)) => match check_vertex_set(g.n(), witness) {
            Err(e) => rep.add("range", Err(e)),
            Ok(in_set) => {
                rep.add("range", Ok(()));
                rep.add("size", check_size(witness.len(), target));
                let bad = g.vertices().find(|&v| {
                    !in_set[v as usize] && !g.neighbors(v).iter().any(|&w| in_set[w as usize])
                });
                rep.add(
                    "domination",
                    match bad {
                        None => Ok(()),
                        Some(v) => Err(format!("vertex {} is undominated", v)),
                    },
                );
            }
        },
        (ProblemKind::TotalDominatingSet, ProblemInput::Graph(g)) => {
            match check_vertex_set(g.n(), witness) {
                Err(e) => rep.add("range", Err(e)),
                Ok(in_set) => {
                    rep.add("range", Ok(()));
                    rep.add("size", check_size(witness.len(), target));
                    let bad = g
                        .vertices()
                        .find(|&v| !g.neighbors(v).iter().any(|&w| in_set[w as usize]));
                    rep.add(
                        "total_domination",
                        match bad {
                            None => Ok(()),
                            Some(v) => Err(format!("vertex {} has no neighbor in the set", v)),
                        },
                    );
                }
            }
        }
        (ProblemKind::KrFreeDeletion(r), ProblemInput::Graph(g)) => {
            match check_vertex_set(g.n(), witness) {
                Err(e) => rep.add("range", Err(e)),
                Ok(in_set) => {
                    rep.add("range", Ok(()));
                    rep.add("size", check_size(witness.len(), target));
                    let alive: Vec<bool> = in_set.iter().map(|&b| !b).collect();
                    rep.add(
                        "clique_free",
                        match find_clique(g, r as usize, &alive) {
                            None => Ok(()),
                            Some(c) => Err(format!("clique {:?} survives the deletions", c)),
                        },
                    );
                }
            }
        }
        (ProblemKind::MaxCut, ProblemInput::Graph(g)) => match check_vertex_set(g.n(), witness) {
            Err(e) => rep.add("range", Err(e)),
            Ok(in_set) => {
                rep.add("range", Ok(()));
                let cut =
                    g.edges().filter(|&(u, v)| in_set[u as usize] != in_set[v as usize]).count();
                rep.add(
                    "cut",
                    if cut as u32 >= target {
                        Ok(())
                    } else {
                        Err(format!("cut has {} edges, target is {}", cut, target))
                    },
                );
            }
        },
        (ProblemKind::HittingSet, ProblemInput::Sets(h)) => {
            let bad = witness.iter().find(|&&e| e >= h.universe);
            match bad {
                Some(&e) => rep.add("range", Err(format!("witness mentions unknown element {}", e))),
                None => {
                    rep.add("range", Ok(()));
                    rep.add("size", check_size(witness.len(), target));
                    let unhit = h
                        .sets
                        .iter()
                        .position(|s| !s.iter().any(|e| witness.contains(e)));
                    rep.add(
                        "hitting",
                        match unhit {
                            None => Ok(()),
                            Some(j) => Err(format!("set {} is not hit", j)),
                        },
                    );
                }
            }
        }
        (ProblemKind::Sat, ProblemInput::Cnf(f)) => {
            let bad = witness.iter().find(|&&v| v == 0 || v > f.num_vars);
            match bad {
                Some(&v) => rep.add("range", Err(format!("witness mentions unknown variable {}", v))),
                None => {
                    rep.add("range", Ok(()));
                    let mut assign = vec![false; f.num_vars as usize];
                    for &v in witness {
                        assign[v as usize - 1] = true;
                    }
                    let unsat = f.clauses.iter().position(|cl| {
                        !cl.iter().any(|&lit| {
                            let val = assign[(lit.unsigned_abs() - 1) as usize];
                            if lit > 0 {
                                val
                            } else {
                                !val
                            }
                        })
                    });
                    rep.add(
                        "satisfied",
                        match unsat {
                            None => Ok(()),
                            Some(j) => Err(format!("clause {} is unsatisfied", j + 1)),
                        },
                    );
                }
            }
        }
        _ => rep.add("shape", Err("problem kind does not match input payload".into())),
    }
    rep
}

fn check_size(len: usize, target: u32) -> Result<(), String> {
    if len as u64 <= target as u64 {
        Ok(())
    } else {
        Err(format!("witness has {} vertices, target is {}", len, target))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::dtc::{build_sparse_reduction, forward_solution, DEFAULT_MAX_VERTICES};
    use crate::reductions::{CnfFormula, HittingSetInstance, PackingEntry};

    fn cycle(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> =
            (0..n as u32).map(|v| (v, (v + 1) % n as u32)).collect();
        Graph::with_edges(n, &edges)
    }

    #[test]
    fn dtc_solution_report_items() {
        let c5 = cycle(5);
        let good = Solution::new(vec![0, 1, 2, 1, 2]);
        let rep = verify_dtc_solution(&c5, &good, 2, 1);
        assert!(rep.pass(), "{}", rep.render_text());

        // same coloring against a zero budget
        let rep = verify_dtc_solution(&c5, &good, 2, 0);
        assert!(!rep.item("budget").unwrap().pass);
        assert!(rep.item("edge_condition").unwrap().pass);

        let k3 = Graph::with_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let rep = verify_dtc_solution(&k3, &Solution::new(vec![1, 2, 1]), 2, 0);
        assert!(!rep.pass());
        let item = rep.item("edge_condition").unwrap();
        assert!(!item.pass);
        assert!(item.detail.contains("edge {0,2}"), "{}", item.detail);

        let rep = verify_dtc_solution(&k3, &Solution::new(vec![1, 3, 2]), 2, 0);
        assert!(!rep.item("color_range").unwrap().pass);

        let rep = verify_dtc_solution(&k3, &Solution::new(vec![1, 2]), 2, 0);
        assert!(!rep.pass());
        assert_eq!(rep.items.len(), 1);

        let text = verify_dtc_solution(&k3, &Solution::new(vec![1, 2, 1]), 2, 0).render_text();
        assert!(text.contains("result: fail"));
        let kv = verify_dtc_solution(&c5, &good, 2, 1).render_kv();
        assert!(kv.contains("pass=true"));
        assert!(kv.contains("edge_condition=ok"));
    }

    #[test]
    fn reduction_instance_passes_and_mutations_fail() {
        let f = CnfFormula::new(1, vec![vec![1]]).unwrap();
        let inst = build_sparse_reduction(&f, 2, 1, DEFAULT_MAX_VERTICES).unwrap();
        let rep = verify_reduction_instance(&inst);
        assert!(rep.pass(), "{}", rep.render_text());

        // two packing pieces sharing a vertex
        let mut bad = inst.clone();
        bad.packing[0].verts = bad.packing[1].verts.clone();
        let rep = verify_reduction_instance(&bad);
        assert!(!rep.item("packing_disjoint").unwrap().pass);

        // a bag wider than the declared width, spliced into a witness
        let mut bad = inst.clone();
        let w = bad
            .witnesses
            .iter()
            .position(|w| w.covered_vertices().len() >= 4)
            .expect("some component has at least 4 vertices");
        let fat: Vec<u32> = bad.witnesses[w].covered_vertices()[..4].to_vec();
        let anchor = bad.witnesses[w].bags.len() - 1;
        bad.witnesses[w].bags.push(fat);
        bad.witnesses[w].edges.push((anchor, anchor + 1));
        let rep = verify_reduction_instance(&bad);
        assert!(!rep.item("witness_valid").unwrap().pass);
        assert!(rep.item("witness_cover").unwrap().pass);

        // an inflated claim the oracle cannot reproduce
        let mut bad = inst.clone();
        bad.packing[0].claim += 1;
        bad.cost_packing += 1;
        let rep = verify_reduction_instance(&bad);
        assert!(!rep.item("packing_claims").unwrap().pass);

        // worker count must not change the report
        for threads in [2, 5] {
            let a = verify_reduction_instance_threaded(&inst, threads);
            assert_eq!(a.render_text(), verify_reduction_instance(&inst).render_text());
            let b = verify_reduction_instance_threaded(&bad, threads);
            assert_eq!(b.render_text(), verify_reduction_instance(&bad).render_text());
        }
    }

    #[test]
    fn forward_witness_dies_with_an_extra_central_deletion() {
        let f = CnfFormula::new(1, vec![vec![1]]).unwrap();
        let inst = build_sparse_reduction(&f, 2, 1, DEFAULT_MAX_VERTICES).unwrap();
        let r = inst.params.as_ref().unwrap().r;
        let sol = forward_solution(&inst, &[true]).unwrap();
        let rep = verify_dtc_solution(&inst.graph, &sol, r, inst.budget);
        assert!(rep.pass(), "{}", rep.render_text());

        let spare = *inst
            .central
            .iter()
            .find(|&&v| !sol.is_deleted(v))
            .expect("the free clique is never deleted");
        let mut broken = sol.clone();
        broken.colors[spare as usize] = DELETED;
        let rep = verify_dtc_solution(&inst.graph, &broken, r, inst.budget);
        assert!(!rep.item("budget").unwrap().pass);
        assert!(rep.item("edge_condition").unwrap().pass);
    }

    #[test]
    fn problem_solution_definitional_checks() {
        let p3 = Graph::with_edges(3, &[(0, 1), (1, 2)]);
        let g = ProblemInput::Graph(&p3);
        let rep = verify_problem_solution(ProblemKind::TotalDominatingSet, &g, &[0, 1], 2);
        assert!(rep.pass(), "{}", rep.render_text());

        let k3 = Graph::with_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let rep =
            verify_problem_solution(ProblemKind::VertexCover, &ProblemInput::Graph(&k3), &[0], 1);
        assert!(!rep.pass());
        assert!(rep.item("cover").unwrap().detail.contains("{1,2}"));

        let k4 = Graph::with_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let input = ProblemInput::Graph(&k4);
        assert!(verify_problem_solution(ProblemKind::MaxCut, &input, &[0, 1], 4).pass());
        assert!(!verify_problem_solution(ProblemKind::MaxCut, &input, &[0, 1], 5).pass());

        assert!(!verify_problem_solution(ProblemKind::KrFreeDeletion(3), &input, &[0], 1).pass());
        assert!(verify_problem_solution(ProblemKind::KrFreeDeletion(3), &input, &[0, 1], 2).pass());

        let h = HittingSetInstance { universe: 3, sets: vec![vec![0, 1], vec![2]], budget: 2 };
        let sets = ProblemInput::Sets(&h);
        assert!(verify_problem_solution(ProblemKind::HittingSet, &sets, &[0, 2], 2).pass());
        let rep = verify_problem_solution(ProblemKind::HittingSet, &sets, &[0], 2);
        assert!(!rep.item("hitting").unwrap().pass);

        let f = CnfFormula::new(2, vec![vec![1, -2]]).unwrap();
        let cnf = ProblemInput::Cnf(&f);
        assert!(verify_problem_solution(ProblemKind::Sat, &cnf, &[], 1).pass());
        let f2 = CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap();
        let cnf2 = ProblemInput::Cnf(&f2);
        let rep = verify_problem_solution(ProblemKind::Sat, &cnf2, &[1], 1);
        assert!(!rep.item("satisfied").unwrap().pass);

        let rep = verify_problem_solution(ProblemKind::Sat, &g, &[], 1);
        assert!(!rep.pass());
    }

    #[test]
    fn oversized_pieces_are_flagged_not_trusted() {
        let f = CnfFormula::new(1, vec![vec![1]]).unwrap();
        let mut inst = build_sparse_reduction(&f, 2, 1, DEFAULT_MAX_VERTICES).unwrap();
        assert!(inst.graph.n() > CLAIM_ORACLE_CAP);
        inst.packing =
            vec![PackingEntry { claim: 1, verts: (0..=CLAIM_ORACLE_CAP as u32).collect() }];
        inst.cost_packing = 1;
        let rep = verify_reduction_instance(&inst);
        let item = rep.item("packing_claims").unwrap();
        assert!(!item.pass);
        assert!(item.detail.contains("verification cap"), "{}", item.detail);
    }
}
