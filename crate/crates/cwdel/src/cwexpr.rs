//! Clique-width expressions: AST, text format, evaluation to a labeled
//! graph, validity checks, and a seeded random generator for tests.
//!
//! Text grammar, whitespace free-form:
//!   E := intro(L,NAME) | union(E,E) | relab(I,J,E) | join(I,J,E)
//! Labels are positive integers, names match [A-Za-z0-9_]+ and must be
//! unique across the expression.

use crate::graph::Graph;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Intro { label: u32, name: String },
    Union(Box<Expr>, Box<Expr>),
    Relabel { from: u32, to: u32, child: Box<Expr> },
    Join { a: u32, b: u32, child: Box<Expr> },
}

impl Expr {
    pub fn intro(label: u32, name: impl Into<String>) -> Expr {
        assert!(label >= 1, "labels start at 1");
        Expr::Intro { label, name: name.into() }
    }

    pub fn union(left: Expr, right: Expr) -> Expr {
        Expr::Union(Box::new(left), Box::new(right))
    }

    pub fn relabel(from: u32, to: u32, child: Expr) -> Expr {
        assert!(from >= 1 && to >= 1 && from != to, "relabel needs two distinct labels");
        Expr::Relabel { from, to, child: Box::new(child) }
    }

    pub fn join(a: u32, b: u32, child: Expr) -> Expr {
        assert!(a >= 1 && b >= 1 && a != b, "join needs two distinct labels");
        Expr::Join { a, b, child: Box::new(child) }
    }

    /// Number of vertices the expression introduces.
    pub fn count_intros(&self) -> usize {
        match self {
            Expr::Intro { .. } => 1,
            Expr::Union(l, r) => l.count_intros() + r.count_intros(),
            Expr::Relabel { child, .. } | Expr::Join { child, .. } => child.count_intros(),
        }
    }

    /// Largest label mentioned anywhere.
    pub fn max_label(&self) -> u32 {
        match self {
            Expr::Intro { label, .. } => *label,
            Expr::Union(l, r) => l.max_label().max(r.max_label()),
            Expr::Relabel { from, to, child } => child.max_label().max(*from).max(*to),
            Expr::Join { a, b, child } => child.max_label().max(*a).max(*b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    names: HashSet<String>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
    }

    fn ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        self.ws();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == c {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a name");
        }
        Ok(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    fn label(&mut self) -> Result<u32, ParseError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a label");
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        let value: u32 = match text.parse() {
            Ok(v) => v,
            Err(_) => return self.err("label out of range"),
        };
        if value == 0 {
            self.pos = start;
            return self.err("labels start at 1");
        }
        Ok(value)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.ws();
        let head_pos = self.pos;
        let head = self.ident()?;
        match head.as_str() {
            "intro" => {
                self.expect(b'(')?;
                let label = self.label()?;
                self.expect(b',')?;
                self.ws();
                let name_pos = self.pos;
                let name = self.ident()?;
                if !self.names.insert(name.clone()) {
                    return Err(ParseError {
                        pos: name_pos,
                        msg: format!("duplicate vertex name '{}'", name),
                    });
                }
                self.expect(b')')?;
                Ok(Expr::Intro { label, name })
            }
            "union" => {
                self.expect(b'(')?;
                let left = self.expr()?;
                self.expect(b',')?;
                let right = self.expr()?;
                self.expect(b')')?;
                Ok(Expr::union(left, right))
            }
            "relab" | "join" => {
                self.expect(b'(')?;
                let i = self.label()?;
                self.expect(b',')?;
                let j_pos = {
                    self.ws();
                    self.pos
                };
                let j = self.label()?;
                if i == j {
                    return Err(ParseError {
                        pos: j_pos,
                        msg: format!("{} needs two distinct labels", head),
                    });
                }
                self.expect(b',')?;
                let child = self.expr()?;
                self.expect(b')')?;
                Ok(if head == "relab" {
                    Expr::Relabel { from: i, to: j, child: Box::new(child) }
                } else {
                    Expr::Join { a: i, b: j, child: Box::new(child) }
                })
            }
            other => Err(ParseError {
                pos: head_pos,
                msg: format!("unknown operation '{}'", other),
            }),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0, names: HashSet::new() };
    let e = p.expr()?;
    p.ws();
    if p.pos != p.bytes.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

pub fn render_expr(e: &Expr) -> String {
    match e {
        Expr::Intro { label, name } => format!("intro({},{})", label, name),
        Expr::Union(l, r) => format!("union({},{})", render_expr(l), render_expr(r)),
        Expr::Relabel { from, to, child } => {
            format!("relab({},{},{})", from, to, render_expr(child))
        }
        Expr::Join { a, b, child } => format!("join({},{},{})", a, b, render_expr(child)),
    }
}

/// A graph whose vertices carry labels from the expression algebra. Vertex
/// ids follow the order of intro operations, left to right.
#[derive(Clone, Debug)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: Vec<u32>,
    pub names: Vec<String>,
}

pub fn evaluate_expr(e: &Expr) -> LabeledGraph {
    let n = e.count_intros();
    let mut out = LabeledGraph {
        graph: Graph::new(n),
        labels: vec![0; n],
        names: vec![String::new(); n],
    };
    let mut next = 0u32;
    fn eval(e: &Expr, out: &mut LabeledGraph, next: &mut u32) -> Vec<u32> {
        match e {
            Expr::Intro { label, name } => {
                let v = *next;
                *next += 1;
                out.labels[v as usize] = *label;
                out.names[v as usize] = name.clone();
                out.graph.set_tag(v, name.clone());
                vec![v]
            }
            Expr::Union(l, r) => {
                let mut vs = eval(l, out, next);
                vs.extend(eval(r, out, next));
                vs
            }
            Expr::Relabel { from, to, child } => {
                let vs = eval(child, out, next);
                for &v in &vs {
                    if out.labels[v as usize] == *from {
                        out.labels[v as usize] = *to;
                    }
                }
                vs
            }
            Expr::Join { a, b, child } => {
                let vs = eval(child, out, next);
                let left: Vec<u32> =
                    vs.iter().copied().filter(|&v| out.labels[v as usize] == *a).collect();
                let right: Vec<u32> =
                    vs.iter().copied().filter(|&v| out.labels[v as usize] == *b).collect();
                for &u in &left {
                    for &v in &right {
                        out.graph.add_edge(u, v);
                    }
                }
                vs
            }
        }
    }
    let vs = eval(e, &mut out, &mut next);
    debug_assert_eq!(vs.len(), n);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Validity {
    pub k_valid: bool,
    pub linear: bool,
}

/// k-validity (all labels <= k) and linearity (every union's right side
/// builds a single-vertex graph).
pub fn validate_expr(e: &Expr, k: u32) -> Validity {
    fn linear(e: &Expr) -> bool {
        match e {
            Expr::Intro { .. } => true,
            Expr::Union(l, r) => linear(l) && linear(r) && r.count_intros() == 1,
            Expr::Relabel { child, .. } | Expr::Join { child, .. } => linear(child),
        }
    }
    Validity { k_valid: e.max_label() <= k, linear: linear(e) }
}

/// Seeded random expression over n vertices and labels 1..=k. Mixes sparse,
/// moderate, and join-heavy shapes so evaluated edge counts spread out.
pub fn random_expr(n: usize, k: u32, seed: u64) -> Expr {
    assert!(n >= 1 && k >= 2, "need n >= 1 and k >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // 0 = no decorations, 1 = occasional, 2 = join-heavy
    let mode = rng.random_range(0..=2u32);
    let mut pool: Vec<Expr> = (1..=n)
        .map(|i| {
            let label = if mode == 2 && !rng.random_bool(0.15) {
                rng.random_range(2..=k)
            } else {
                rng.random_range(1..=k)
            };
            Expr::intro(label, format!("v{}", i))
        })
        .collect();
    while pool.len() > 1 {
        // join-heavy shapes fold left-deep so every union attaches one fresh
        // leaf to the joined mass; otherwise the merge point is random
        let i = if mode == 2 { 0 } else { rng.random_range(0..pool.len() - 1) };
        let a = pool.remove(i);
        let b = pool.remove(i);
        let mut e = Expr::union(a, b);
        match mode {
            0 => {}
            1 => {
                for _ in 0..rng.random_range(0..=2) {
                    let x = rng.random_range(1..=k);
                    let y = rng.random_range(1..=k);
                    if x == y {
                        continue;
                    }
                    if rng.random_bool(0.55) {
                        e = Expr::join(x, y, e);
                    } else {
                        e = Expr::relabel(x, y, e);
                    }
                }
            }
            _ => {
                // join the accumulated label-1 mass with a fresh label, then
                // usually fold that label away so density compounds
                let y = rng.random_range(2..=k);
                e = Expr::join(1, y, e);
                if rng.random_bool(0.9) {
                    e = Expr::relabel(y, 1, e);
                }
            }
        }
        pool.insert(i, e);
    }
    pool.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basics() {
        assert_eq!(parse_expr("intro(1,a)").unwrap(), Expr::intro(1, "a"));
        let e = parse_expr("join(1,2,union(intro(1,a),intro(2,b)))").unwrap();
        let lg = evaluate_expr(&e);
        assert_eq!(lg.graph.n(), 2);
        assert!(lg.graph.has_edge(0, 1));
    }

    #[test]
    fn parse_tolerates_whitespace() {
        let e = parse_expr("  join( 1 , 2 ,\n  union( intro(1, a), intro(2, b) ) )\n").unwrap();
        assert_eq!(render_expr(&e), "join(1,2,union(intro(1,a),intro(2,b)))");
    }

    #[test]
    fn parse_rejects_equal_labels() {
        let err = parse_expr("relab(1,1,intro(1,a))").unwrap_err();
        assert!(err.msg.contains("distinct"));
        assert!(parse_expr("join(2,2,intro(1,a))").is_err());
    }

    #[test]
    fn parse_rejects_duplicate_names() {
        let err = parse_expr("union(intro(1,a),intro(2,a))").unwrap_err();
        assert!(err.msg.contains("duplicate"));
    }

    #[test]
    fn parse_rejects_syntax_garbage() {
        assert!(parse_expr("intro(0,a)").is_err());
        assert!(parse_expr("intro(1,a) extra").is_err());
        assert!(parse_expr("frob(1,a)").is_err());
        assert!(parse_expr("union(intro(1,a)").is_err());
        assert!(parse_expr("").is_err());
    }

    #[test]
    fn render_parse_roundtrip() {
        let text = "relab(2,1,join(1,2,union(intro(1,a),union(intro(2,b),intro(2,c)))))";
        let e = parse_expr(text).unwrap();
        assert_eq!(render_expr(&e), text);
        assert_eq!(parse_expr(&render_expr(&e)).unwrap(), e);
    }

    #[test]
    fn evaluate_star() {
        let e = parse_expr("join(1,2,union(intro(1,a),union(intro(2,b),intro(2,c))))").unwrap();
        let lg = evaluate_expr(&e);
        assert_eq!(lg.graph.n(), 3);
        assert_eq!(lg.graph.m(), 2);
        assert!(lg.graph.has_edge(0, 1) && lg.graph.has_edge(0, 2));
        assert!(!lg.graph.has_edge(1, 2));
        assert_eq!(lg.names, vec!["a", "b", "c"]);
    }

    #[test]
    fn evaluate_triangle_via_relabel() {
        // build K2 on labels {1,2}, fold both into label 1, add a third vertex
        let k2 = parse_expr("join(1,2,union(intro(1,a),intro(2,b)))").unwrap();
        let e = Expr::join(1, 2, Expr::union(Expr::relabel(2, 1, k2), Expr::intro(2, "c")));
        let lg = evaluate_expr(&e);
        assert_eq!(lg.graph.n(), 3);
        assert_eq!(lg.graph.m(), 3);
        // after relab(2,1) no vertex below that node kept label 2
        assert_eq!(lg.labels, vec![1, 1, 2]);
    }

    #[test]
    fn evaluate_union_keeps_vertices_isolated() {
        let e = parse_expr("union(intro(1,a),intro(1,b))").unwrap();
        let lg = evaluate_expr(&e);
        assert_eq!((lg.graph.n(), lg.graph.m()), (2, 0));
        assert_eq!(lg.labels, vec![1, 1]);
    }

    #[test]
    fn validity_checks() {
        let e = parse_expr("intro(3,a)").unwrap();
        assert!(!validate_expr(&e, 2).k_valid);
        assert!(validate_expr(&e, 3).k_valid);

        let lin = parse_expr("union(union(intro(1,a),intro(1,b)),intro(1,c))").unwrap();
        assert!(validate_expr(&lin, 1).linear);
        let nonlin = parse_expr(
            "union(union(intro(1,a),intro(1,b)),union(intro(1,c),intro(1,d)))",
        )
        .unwrap();
        assert!(!validate_expr(&nonlin, 1).linear);
    }

    #[test]
    fn random_exprs_are_valid_and_sized() {
        for seed in 0..30 {
            let e = random_expr(6, 3, seed);
            let v = validate_expr(&e, 3);
            assert!(v.k_valid);
            let lg = evaluate_expr(&e);
            assert_eq!(lg.graph.n(), 6);
            assert!(lg.labels.iter().all(|&l| (1..=3).contains(&l)));
        }
        assert_eq!(random_expr(1, 2, 99).count_intros(), 1);
    }

    #[test]
    fn random_exprs_are_deterministic() {
        let a = random_expr(7, 2, 42);
        let b = random_expr(7, 2, 42);
        assert_eq!(render_expr(&a), render_expr(&b));
    }

    #[test]
    fn random_expr_density_spread() {
        let counts: Vec<usize> =
            (1..=100).map(|seed| evaluate_expr(&random_expr(8, 2, seed)).graph.m()).collect();
        let lo = *counts.iter().min().unwrap();
        let hi = *counts.iter().max().unwrap();
        assert_eq!(lo, 0, "some seed should give an edgeless graph");
        assert!(hi > 20, "join-heavy seeds should pass 20 edges, best was {}", hi);
    }
}
