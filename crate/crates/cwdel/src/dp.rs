//! Dynamic program over clique-width expressions for minimum deletions to
//! r-colorability.
//!
//! A state assigns each label a subset of the r colors: the colors that
//! actually appear on that label's vertices. States are packed into a u32,
//! bit (label-1)*r + (color-1). Table entries are deletion counts with
//! u32::MAX as infinity; additions saturate, so infinity absorbs.
//!
//! Every node's table is masked so that states demanding more colors on a
//! label than the label has vertices are infinite. The relabel rule needs
//! this (its source label ends up empty), and it also makes joins with an
//! empty side behave as no-ops without special cases.

use crate::cwexpr::Expr;
use crate::oracle::Solution;

pub const INFINITY: u32 = u32::MAX;

/// Cap on k*r so tables stay addressable and affordable.
pub const STATE_BITS_CAP: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpTable {
    pub k: u32,
    pub r: u8,
    pub entries: Vec<u32>,
}

impl DpTable {
    fn new(k: u32, r: u8) -> Self {
        let bits = k * r as u32;
        assert!(bits <= STATE_BITS_CAP);
        DpTable { k, r, entries: vec![INFINITY; 1usize << bits] }
    }

    pub fn bits(&self) -> u32 {
        self.k * self.r as u32
    }

    pub fn get(&self, state: u32) -> u32 {
        self.entries[state as usize]
    }

    /// Smallest state among those with minimum cost, with that cost.
    pub fn min_entry(&self) -> (u32, u32) {
        let mut best = (0u32, INFINITY);
        for (f, &c) in self.entries.iter().enumerate() {
            if c < best.1 {
                best = (f as u32, c);
            }
        }
        best
    }
}

/// Colors recorded for `label` in `state`.
pub fn state_block(state: u32, label: u32, r: u8) -> u32 {
    (state >> ((label - 1) * r as u32)) & ((1u32 << r) - 1)
}

/// `state` with the colors of `label` replaced by `colors`.
pub fn state_with_block(state: u32, label: u32, r: u8, colors: u32) -> u32 {
    let shift = (label - 1) * r as u32;
    let mask = ((1u32 << r) - 1) << shift;
    (state & !mask) | (colors << shift)
}

/// All tables of one bottom-up run, in post-order over the expression tree.
#[derive(Clone, Debug)]
pub struct DpTables {
    pub nodes: Vec<DpTable>,
}

impl DpTables {
    pub fn root(&self) -> &DpTable {
        self.nodes.last().expect("no nodes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CoverStrategy {
    /// plain double loop over table pairs
    Direct,
    // TODO: ranked zeta/Moebius transform variant if large k*r universes
    // ever become a real use case
}

/// Min-sum cover product: out[f] = min over f1 | f2 = f of t1[f1] + t2[f2].
pub fn cover_product_minplus(t1: &DpTable, t2: &DpTable) -> Result<DpTable, String> {
    if t1.k != t2.k || t1.r != t2.r {
        return Err(format!(
            "cover product universe mismatch: {}x{} vs {}x{}",
            t1.k, t1.r, t2.k, t2.r
        ));
    }
    Ok(cover_product_with(CoverStrategy::Direct, t1, t2))
}

fn cover_product_with(strategy: CoverStrategy, t1: &DpTable, t2: &DpTable) -> DpTable {
    let CoverStrategy::Direct = strategy;
    let mut out = DpTable::new(t1.k, t1.r);
    for (f1, &a) in t1.entries.iter().enumerate() {
        if a == INFINITY {
            continue;
        }
        for (f2, &b) in t2.entries.iter().enumerate() {
            if b == INFINITY {
                continue;
            }
            let f = f1 | f2;
            let cost = a.saturating_add(b);
            if cost < out.entries[f] {
                out.entries[f] = cost;
            }
        }
    }
    out
}

fn apply_count_mask(t: &mut DpTable, counts: &[u32]) {
    let k = t.k;
    let r = t.r;
    for f in 0..t.entries.len() as u32 {
        if t.entries[f as usize] == INFINITY {
            continue;
        }
        for label in 1..=k {
            if state_block(f, label, r).count_ones() > counts[label as usize] {
                t.entries[f as usize] = INFINITY;
                break;
            }
        }
    }
}

fn node_count(e: &Expr) -> usize {
    match e {
        Expr::Intro { .. } => 1,
        Expr::Union(l, r) => 1 + node_count(l) + node_count(r),
        Expr::Relabel { child, .. } | Expr::Join { child, .. } => 1 + node_count(child),
    }
}

/// Bottom-up table computation for every node, post-order.
pub fn solve_tables(e: &Expr, r: u8) -> Result<DpTables, String> {
    assert!(r >= 1, "need r >= 1");
    let k = e.max_label();
    let bits = k * r as u32;
    if bits > STATE_BITS_CAP {
        return Err(format!(
            "state space needs {} bits (k={}, r={}), cap is {}",
            bits, k, r, STATE_BITS_CAP
        ));
    }
    let mut nodes: Vec<DpTable> = Vec::with_capacity(node_count(e));

    // returns per-label vertex counts of the subtree, indexed 1..=k
    fn go(e: &Expr, k: u32, r: u8, nodes: &mut Vec<DpTable>) -> Vec<u32> {
        match e {
            Expr::Intro { label, .. } => {
                let mut t = DpTable::new(k, r);
                t.entries[0] = 1; // vertex deleted
                for c in 0..r as u32 {
                    t.entries[state_with_block(0, *label, r, 1 << c) as usize] = 0;
                }
                let mut counts = vec![0u32; k as usize + 1];
                counts[*label as usize] = 1;
                nodes.push(t);
                counts
            }
            Expr::Union(le, re) => {
                let lc = go(le, k, r, nodes);
                let lt = nodes.len() - 1;
                let rc = go(re, k, r, nodes);
                let rt = nodes.len() - 1;
                let mut t = cover_product_with(CoverStrategy::Direct, &nodes[lt], &nodes[rt]);
                let counts: Vec<u32> = lc.iter().zip(&rc).map(|(a, b)| a + b).collect();
                apply_count_mask(&mut t, &counts);
                nodes.push(t);
                counts
            }
            Expr::Relabel { from, to, child } => {
                let mut counts = go(child, k, r, nodes);
                let ct = nodes.len() - 1;
                let mut t = DpTable::new(k, r);
                for f in 0..t.entries.len() as u32 {
                    if state_block(f, *from, r) != 0 {
                        continue; // the source label has no vertices afterwards
                    }
                    let s = state_block(f, *to, r);
                    let mut best = INFINITY;
                    // all (x, y) with x union y = s
                    let mut x = s;
                    loop {
                        let rest = s & !x;
                        let mut u = x;
                        loop {
                            let y = rest | u;
                            let fp = state_with_block(
                                state_with_block(f, *from, r, x),
                                *to,
                                r,
                                y,
                            );
                            let c = nodes[ct].entries[fp as usize];
                            if c < best {
                                best = c;
                            }
                            if u == 0 {
                                break;
                            }
                            u = (u - 1) & x;
                        }
                        if x == 0 {
                            break;
                        }
                        x = (x - 1) & s;
                    }
                    t.entries[f as usize] = best;
                }
                counts[*to as usize] += counts[*from as usize];
                counts[*from as usize] = 0;
                apply_count_mask(&mut t, &counts);
                nodes.push(t);
                counts
            }
            Expr::Join { a, b, child } => {
                let counts = go(child, k, r, nodes);
                let ct = nodes.len() - 1;
                let mut t = nodes[ct].clone();
                for f in 0..t.entries.len() as u32 {
                    if state_block(f, *a, r) & state_block(f, *b, r) != 0 {
                        t.entries[f as usize] = INFINITY;
                    }
                }
                apply_count_mask(&mut t, &counts);
                nodes.push(t);
                counts
            }
        }
    }

    go(e, k, r, &mut nodes);
    Ok(DpTables { nodes })
}

/// Rebuilds a concrete solution for `target` by re-running each node's
/// recurrence and descending into the smallest achieving predecessor state.
/// Vertex ids follow intro order, matching evaluate_expr.
pub fn reconstruct_witness(e: &Expr, tables: &DpTables, target: u32) -> Result<Solution, String> {
    let root = tables.root();
    if root.get(target) == INFINITY {
        return Err("target state has infinite cost".to_string());
    }
    let n = e.count_intros();
    let mut colors = vec![0u8; n];
    let mut next_vertex = 0u32;

    fn go(
        e: &Expr,
        node: usize,
        f: u32,
        tables: &DpTables,
        colors: &mut [u8],
        next_vertex: &mut u32,
    ) {
        let t = &tables.nodes[node];
        let cost = t.get(f);
        debug_assert_ne!(cost, INFINITY);
        let r = t.r;
        match e {
            Expr::Intro { label, .. } => {
                let v = *next_vertex;
                *next_vertex += 1;
                let block = state_block(f, *label, r);
                if block == 0 {
                    colors[v as usize] = 0;
                } else {
                    debug_assert_eq!(block.count_ones(), 1);
                    colors[v as usize] = block.trailing_zeros() as u8 + 1;
                }
            }
            Expr::Union(le, re) => {
                let right_root = node - 1;
                let left_root = node - 1 - node_count(re);
                let lt = &tables.nodes[left_root];
                let rt = &tables.nodes[right_root];
                // smallest f1, then smallest f2, that realize the cost
                'search: for f1 in 0..=f {
                    if f1 & f != f1 || lt.get(f1) == INFINITY {
                        continue;
                    }
                    for f2 in 0..=f {
                        if f2 & f != f2 || f1 | f2 != f {
                            continue;
                        }
                        if lt.get(f1).saturating_add(rt.get(f2)) == cost {
                            go(le, left_root, f1, tables, colors, next_vertex);
                            go(re, right_root, f2, tables, colors, next_vertex);
                            break 'search;
                        }
                    }
                }
            }
            Expr::Relabel { from, to, child } => {
                let ct = node - 1;
                let s = state_block(f, *to, r);
                debug_assert_eq!(state_block(f, *from, r), 0);
                let child_table = &tables.nodes[ct];
                for fp in 0..child_table.entries.len() as u32 {
                    if child_table.get(fp) != cost {
                        continue;
                    }
                    let x = state_block(fp, *from, r);
                    let y = state_block(fp, *to, r);
                    if x | y != s {
                        continue;
                    }
                    // all other labels must agree
                    let neutral = state_with_block(state_with_block(fp, *from, r, 0), *to, r, 0);
                    let here = state_with_block(state_with_block(f, *from, r, 0), *to, r, 0);
                    if neutral == here {
                        go(child, ct, fp, tables, colors, next_vertex);
                        return;
                    }
                }
                unreachable!("relabel cost without achieving child state");
            }
            Expr::Join { child, .. } => {
                go(child, node - 1, f, tables, colors, next_vertex);
            }
        }
    }

    go(e, tables.nodes.len() - 1, target, tables, &mut colors, &mut next_vertex);
    debug_assert_eq!(next_vertex as usize, n);
    Ok(Solution::new(colors))
}

/// Full solve: min cost over all root states, decision against an optional
/// budget, the root table, and a reconstructed witness.
#[derive(Clone, Debug)]
pub struct DpSolved {
    pub min_cost: u32,
    pub decision: Option<bool>,
    pub best_state: u32,
    pub root: DpTable,
    pub witness: Solution,
}

pub fn solve_expression(e: &Expr, r: u8, budget: Option<u32>) -> Result<DpSolved, String> {
    let tables = solve_tables(e, r)?;
    let (best_state, min_cost) = tables.root().min_entry();
    debug_assert_ne!(min_cost, INFINITY, "deleting everything is always allowed");
    let witness = reconstruct_witness(e, &tables, best_state)?;
    debug_assert_eq!(witness.cost(), min_cost);
    Ok(DpSolved {
        min_cost,
        decision: budget.map(|b| min_cost <= b),
        best_state,
        root: tables.nodes.last().unwrap().clone(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cwexpr::{evaluate_expr, parse_expr, random_expr};
    use crate::oracle::{min_deletions_r_colorable, DeletionOutcome};

    fn state(pairs: &[(u32, &[u8])], r: u8) -> u32 {
        let mut f = 0;
        for &(label, colors) in pairs {
            let mut bits = 0;
            for &c in colors {
                bits |= 1 << (c - 1);
            }
            f = state_with_block(f, label, r, bits);
        }
        f
    }

    #[test]
    fn base_table_matches_hand_computation() {
        let e = parse_expr("intro(1,a)").unwrap();
        let tables = solve_tables(&e, 2).unwrap();
        let t = tables.root();
        assert_eq!(t.get(state(&[], 2)), 1);
        assert_eq!(t.get(state(&[(1, &[1])], 2)), 0);
        assert_eq!(t.get(state(&[(1, &[2])], 2)), 0);
        assert_eq!(t.get(state(&[(1, &[1, 2])], 2)), INFINITY);
        assert_eq!(solve_expression(&e, 2, None).unwrap().min_cost, 0);
    }

    #[test]
    fn join_table_matches_hand_computation() {
        let e = parse_expr("join(1,2,union(intro(1,a),intro(2,b)))").unwrap();
        let t = solve_tables(&e, 2).unwrap();
        let t = t.root().clone();
        // both kept: fine with distinct colors, infinite with a shared one
        assert_eq!(t.get(state(&[(1, &[1]), (2, &[2])], 2)), 0);
        assert_eq!(t.get(state(&[(1, &[2]), (2, &[1])], 2)), 0);
        assert_eq!(t.get(state(&[(1, &[1]), (2, &[1])], 2)), INFINITY);
        // one side deleted costs 1, both sides 2
        assert_eq!(t.get(state(&[(2, &[2])], 2)), 1);
        assert_eq!(t.get(state(&[(1, &[1])], 2)), 1);
        assert_eq!(t.get(state(&[], 2)), 2);
        // a label with one vertex cannot show two colors
        assert_eq!(t.get(state(&[(1, &[1, 2])], 2)), INFINITY);
    }

    #[test]
    fn relabel_table_matches_hand_computation() {
        let e = parse_expr("relab(2,1,join(1,2,union(intro(1,a),intro(2,b))))").unwrap();
        let t = solve_tables(&e, 2).unwrap();
        let t = t.root().clone();
        // label 2 is empty now
        assert_eq!(t.get(state(&[(2, &[1])], 2)), INFINITY);
        assert_eq!(t.get(state(&[(1, &[1]), (2, &[2])], 2)), INFINITY);
        // both kept: the two colors both land on label 1
        assert_eq!(t.get(state(&[(1, &[1, 2])], 2)), 0);
        // keeping one vertex of the K2
        assert_eq!(t.get(state(&[(1, &[1])], 2)), 1);
        assert_eq!(t.get(state(&[(1, &[2])], 2)), 1);
        assert_eq!(t.get(state(&[], 2)), 2);
    }

    #[test]
    fn triangle_needs_one_deletion_for_two_colors() {
        // K3: build K2, fold to label 1, bring in a third vertex, join
        let text = "join(1,2,union(relab(2,1,join(1,2,union(intro(1,a),intro(2,b)))),intro(2,c)))";
        let e = parse_expr(text).unwrap();
        let solved = solve_expression(&e, 2, None).unwrap();
        assert_eq!(solved.min_cost, 1);
        assert_eq!(solved.decision, None);
        let lg = evaluate_expr(&e);
        assert_eq!(lg.graph.m(), 3);
        solved.witness.check(&lg.graph, 2).unwrap();
        assert_eq!(solved.witness.cost(), 1);
    }

    #[test]
    fn budget_decision() {
        let text = "join(1,2,union(relab(2,1,join(1,2,union(intro(1,a),intro(2,b)))),intro(2,c)))";
        let e = parse_expr(text).unwrap();
        assert_eq!(solve_expression(&e, 2, Some(0)).unwrap().decision, Some(false));
        assert_eq!(solve_expression(&e, 2, Some(1)).unwrap().decision, Some(true));
        assert_eq!(solve_expression(&e, 2, Some(5)).unwrap().decision, Some(true));
    }

    #[test]
    fn absent_label_states_are_infinite() {
        let e = parse_expr("union(intro(2,a),intro(2,b))").unwrap();
        let t = solve_tables(&e, 2).unwrap();
        let t = t.root();
        assert_eq!(t.get(state(&[(1, &[1])], 2)), INFINITY);
        assert_eq!(t.get(state(&[(2, &[1, 2])], 2)), 0);
    }

    #[test]
    fn join_leaves_only_disjoint_blocks_finite() {
        let e = parse_expr("join(1,2,union(union(intro(1,a),intro(1,b)),union(intro(2,c),intro(2,d))))")
            .unwrap();
        let tables = solve_tables(&e, 2).unwrap();
        let t = tables.root();
        for f in 0..t.entries.len() as u32 {
            if t.get(f) != INFINITY {
                assert_eq!(state_block(f, 1, 2) & state_block(f, 2, 2), 0, "state {}", f);
            }
        }
    }

    #[test]
    fn cover_product_identity_and_example() {
        let mut id = DpTable::new(2, 1);
        id.entries[0] = 0;
        let mut t1 = DpTable::new(2, 1);
        t1.entries[0] = 0;
        t1.entries[1] = 1;
        let out = cover_product_minplus(&t1, &id).unwrap();
        assert_eq!(out, t1);
        let out = cover_product_minplus(&t1, &t1).unwrap();
        assert_eq!(out.get(1), 1); // {bit0} from (bit0, empty)
        assert_eq!(out.get(0), 0);

        let other = DpTable::new(1, 1);
        assert!(cover_product_minplus(&t1, &other).is_err());
    }

    #[test]
    fn cover_product_matches_brute_force() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let mut t1 = DpTable::new(2, 2);
            let mut t2 = DpTable::new(2, 2);
            for f in 0..16 {
                t1.entries[f] = if rng.random_bool(0.3) { INFINITY } else { rng.random_range(0..6) };
                t2.entries[f] = if rng.random_bool(0.3) { INFINITY } else { rng.random_range(0..6) };
            }
            let fast = cover_product_minplus(&t1, &t2).unwrap();
            for f in 0..16u32 {
                let mut best = INFINITY;
                for f1 in 0..16u32 {
                    for f2 in 0..16u32 {
                        if f1 | f2 == f {
                            best = best.min(t1.get(f1).saturating_add(t2.get(f2)));
                        }
                    }
                }
                assert_eq!(fast.get(f), best, "state {}", f);
            }
            // commutative
            assert_eq!(cover_product_minplus(&t2, &t1).unwrap(), fast);
        }
    }

    #[test]
    fn witness_for_single_intro() {
        let e = parse_expr("intro(1,a)").unwrap();
        let tables = solve_tables(&e, 2).unwrap();
        let sol = reconstruct_witness(&e, &tables, 0).unwrap();
        assert!(sol.is_deleted(0));
        assert!(reconstruct_witness(&e, &tables, 0b11).is_err());
    }

    #[test]
    fn witness_for_k2_keeps_both() {
        let e = parse_expr("join(1,2,union(intro(1,a),intro(2,b)))").unwrap();
        let tables = solve_tables(&e, 2).unwrap();
        let f = state(&[(1, &[1]), (2, &[2])], 2);
        let sol = reconstruct_witness(&e, &tables, f).unwrap();
        assert_eq!(sol.colors, vec![1, 2]);
    }

    #[test]
    fn witness_state_blocks_match_kept_colors() {
        for seed in 0..20 {
            let e = random_expr(7, 3, seed);
            let r = 2u8;
            let tables = solve_tables(&e, r).unwrap();
            let (f, cost) = tables.root().min_entry();
            let sol = reconstruct_witness(&e, &tables, f).unwrap();
            assert_eq!(sol.cost(), cost);
            let lg = evaluate_expr(&e);
            sol.check(&lg.graph, r).unwrap();
            // per label, the kept colors are exactly the state block
            for label in 1..=e.max_label() {
                let mut seen = 0u32;
                for v in lg.graph.vertices() {
                    if lg.labels[v as usize] == label && !sol.is_deleted(v) {
                        seen |= 1 << (sol.color(v) - 1);
                    }
                }
                assert_eq!(seen, state_block(f, label, r), "label {} seed {}", label, seed);
            }
        }
    }

    #[test]
    fn matches_oracle_on_small_expressions() {
        for seed in 100..140 {
            let e = random_expr(6, 3, seed);
            let lg = evaluate_expr(&e);
            for r in 1..=3u8 {
                let dp = solve_expression(&e, r, None).unwrap();
                let oracle = match min_deletions_r_colorable(&lg.graph, r, 6, None) {
                    DeletionOutcome::Solved { cost, .. } => cost,
                    DeletionOutcome::ExceedsCap => unreachable!(),
                };
                assert_eq!(dp.min_cost, oracle, "seed {} r {}", seed, r);
                dp.witness.check(&lg.graph, r).unwrap();
            }
        }
    }

    #[test]
    fn state_cap_enforced() {
        let e = parse_expr("intro(13,a)").unwrap();
        assert!(solve_tables(&e, 2).is_err());
        assert!(solve_tables(&e, 1).is_ok());
    }
}
