//! Acceptance gate: one test per numbered criterion, each ending in a
//! single pass line. A failed criterion panics inside its test, so the
//! missing line plus the assertion message point at what fell over.

use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use cwdel::critical::build_critical;
use cwdel::cwexpr::{evaluate_expr, parse_expr, random_expr};
use cwdel::dp::{solve_expression, solve_tables, state_with_block, INFINITY};
use cwdel::gadgets::{
    add_color_set_gadget, add_thick_arrow, lists_under_central_coloring, GadgetHandle,
    InstanceBuilder,
};
use cwdel::graph::{
    classify_twinclass, exact_treewidth, quotient, twinclass_partition, verify_decomposition,
    Graph, TwinClassKind,
};
use cwdel::oracle::{
    chromatic_number, min_deletions_r_colorable, solve_exact, DeletionOutcome, ProblemInput,
    ProblemKind,
};
use cwdel::reductions::ds::{build_ds_doubling, build_tds_reduction, TdsBlock, STATES};
use cwdel::reductions::dtc::{
    build_dense_reduction, build_sparse_reduction, forward_solution, DEFAULT_MAX_VERTICES,
};
use cwdel::reductions::vc::{
    build_krfree_reduction, build_maxcut_reduction, build_vc_reduction, extract_hitting_set,
    forward_vertex_cover,
};
use cwdel::reductions::{
    choose_p_dense, choose_p_sparse, CnfFormula, HittingSetInstance,
};
use cwdel::reductions::phi::{enumerate_dense_members, enumerate_sparse_members};
use cwdel::verify::{verify_dtc_solution, verify_problem_solution, verify_reduction_instance};

fn pass(n: u32, what: &str) {
    println!("[{:2}] {}: PASS", n, what);
}

fn full(r: u8) -> u32 {
    (1u32 << r) - 1
}

/// Asserts the minimum deletion count is exactly `expected`; the bounded
/// search ascends through smaller sizes first, so a cheaper solution would
/// surface as a smaller cost.
fn expect_min(g: &Graph, r: u8, lists: Option<&[u32]>, expected: u32) {
    match min_deletions_r_colorable(g, r, expected, lists) {
        DeletionOutcome::Solved { cost, .. } => {
            assert_eq!(cost, expected, "found a cheaper solution")
        }
        DeletionOutcome::ExceedsCap => panic!("no solution with {} deletions", expected),
    }
}

/// Oracle outcome on an induced subgraph, with whole-graph lists projected
/// down to the new ids.
fn induced_outcome(
    g: &Graph,
    verts: &[u32],
    r: u8,
    lists: Option<&[u32]>,
    cap: u32,
) -> DeletionOutcome {
    let (sub, map) = g.induced(verts);
    let sub_lists: Option<Vec<u32>> =
        lists.map(|ls| map.iter().map(|&v| ls[v as usize]).collect());
    min_deletions_r_colorable(&sub, r, cap, sub_lists.as_deref())
}

#[test]
fn c01_dp_agrees_with_the_deletion_oracle_on_random_expressions() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..500u64 {
        let n = rng.random_range(1..=10usize);
        let k = rng.random_range(2..=3u32);
        let r = rng.random_range(1..=3u8);
        let e = random_expr(n, k, 0x5EED_0000 + case);
        let lg = evaluate_expr(&e);
        assert_eq!(lg.graph.n(), n);

        let solved = solve_expression(&e, r, None).unwrap();
        let direct = min_deletions_r_colorable(&lg.graph, r, n as u32, None).expect_cost();
        assert_eq!(
            solved.min_cost, direct,
            "case {}: n={} k={} r={} expr={:?}",
            case, n, k, r, e
        );
        solved.witness.check(&lg.graph, r).unwrap();
        assert_eq!(solved.witness.cost(), solved.min_cost);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "500 cases took {:?}", elapsed);
    pass(1, "dp cost equals the deletion oracle on 500 random expressions");
}

#[test]
fn c02_base_join_relabel_tables_match_hand_computations() {
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

    // single introduced vertex: delete it or give it either color, and a
    // state demanding two colors on one vertex is infeasible
    let e = parse_expr("intro(1,a)").unwrap();
    let t = solve_tables(&e, 2).unwrap();
    let t = t.root();
    assert_eq!(t.get(state(&[], 2)), 1);
    assert_eq!(t.get(state(&[(1, &[1])], 2)), 0);
    assert_eq!(t.get(state(&[(1, &[2])], 2)), 0);
    assert_eq!(t.get(state(&[(1, &[1, 2])], 2)), INFINITY);

    // joined K2 across two labels
    let e = parse_expr("join(1,2,union(intro(1,a),intro(2,b)))").unwrap();
    let t = solve_tables(&e, 2).unwrap();
    let t = t.root();
    assert_eq!(t.get(state(&[(1, &[1]), (2, &[2])], 2)), 0);
    assert_eq!(t.get(state(&[(1, &[2]), (2, &[1])], 2)), 0);
    assert_eq!(t.get(state(&[(1, &[1]), (2, &[1])], 2)), INFINITY);
    assert_eq!(t.get(state(&[(2, &[2])], 2)), 1);
    assert_eq!(t.get(state(&[(1, &[1])], 2)), 1);
    assert_eq!(t.get(state(&[], 2)), 2);
    assert_eq!(t.get(state(&[(1, &[1, 2])], 2)), INFINITY);

    // relabel folds both K2 endpoints onto label 1, emptying label 2
    let e = parse_expr("relab(2,1,join(1,2,union(intro(1,a),intro(2,b))))").unwrap();
    let t = solve_tables(&e, 2).unwrap();
    let t = t.root();
    assert_eq!(t.get(state(&[(2, &[1])], 2)), INFINITY);
    assert_eq!(t.get(state(&[(1, &[1]), (2, &[2])], 2)), INFINITY);
    assert_eq!(t.get(state(&[(1, &[1, 2])], 2)), 0);
    assert_eq!(t.get(state(&[(1, &[1])], 2)), 1);
    assert_eq!(t.get(state(&[(1, &[2])], 2)), 1);
    assert_eq!(t.get(state(&[], 2)), 2);

    pass(2, "base, join and relabel tables match the hand computations");
}

#[test]
fn c03_critical_family_has_exact_size_chromaticity_and_width() {
    let start = Instant::now();
    for t in 3..=5u32 {
        for gamma in 1..=4u32 {
            let cg = build_critical(t, gamma);
            assert_eq!(cg.graph.n() as u32, (t - 1) * gamma + 1, "t={} gamma={}", t, gamma);
            assert_eq!(chromatic_number(&cg.graph).unwrap() as u32, t);
            for v in cg.graph.vertices() {
                let keep: Vec<u32> = cg.graph.vertices().filter(|&u| u != v).collect();
                let (h, _) = cg.graph.induced(&keep);
                assert_eq!(
                    chromatic_number(&h).unwrap() as u32,
                    t - 1,
                    "t={} gamma={}: removing vertex {} must drop the chromatic number",
                    t,
                    gamma,
                    v
                );
            }
            let width = verify_decomposition(&cg.graph, &cg.decomposition).unwrap();
            assert_eq!(width, t - 1);
            assert!(cg.decomposition.is_path());
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "family checks took {:?}", elapsed);
    pass(3, "critical family: exact sizes, criticality and width t-1 path decompositions");
}

fn standalone_thick(r: u8, ell: u8) -> (Graph, GadgetHandle) {
    let mut b = InstanceBuilder::new();
    let us: Vec<u32> = (0..r).map(|i| b.add_vertex(&format!("u{}", i + 1))).collect();
    b.add_clique(&us);
    let v = b.add_vertex("v");
    let h = add_thick_arrow(&mut b, &us, v, ell, r).expect("clean attachment");
    (b.finish(), h)
}

fn standalone_color_set(
    r: u8,
    c_mask: u32,
    u_size: usize,
) -> (Graph, GadgetHandle, Vec<u32>, Vec<u32>, u32) {
    let mut b = InstanceBuilder::new();
    let us: Vec<u32> = (0..u_size).map(|i| b.add_vertex(&format!("u{}", i + 1))).collect();
    b.add_clique(&us);
    let v = b.add_vertex("v");
    let f: Vec<u32> = (0..r).map(|s| b.add_vertex(&format!("f{}", s + 1))).collect();
    b.add_clique(&f);
    let h = add_color_set_gadget(&mut b, &us, v, c_mask, &f, r).expect("clean attachment");
    (b.finish(), h, us, f, v)
}

#[test]
fn c04_gadget_lemmas_hold_over_all_boundary_conditions() {
    for r in [2u8, 3] {
        for ell in 1..=r {
            let (g, h) = standalone_thick(r, ell);
            let v = r as u32;
            let piece = &h.packing[0];
            assert_eq!(piece.claim, ell as u32);

            // the piece minimum is exactly ell
            assert!(matches!(
                induced_outcome(&g, &piece.verts, r, None, ell as u32 - 1),
                DeletionOutcome::ExceedsCap
            ));
            assert_eq!(
                induced_outcome(&g, &piece.verts, r, None, ell as u32).expect_cost(),
                ell as u32
            );

            // propagation and blocking: d deleted twins, the rest pinned to
            // distinct colors; the head is deletable at local cost exactly
            // when d reaches ell
            for d in 0..=r {
                let mut base = vec![full(r); g.n()];
                for i in 0..r {
                    base[i as usize] = if i < d { 0 } else { 1 << i };
                }
                let local = d as u32 + ell as u32;
                expect_min(&g, r, Some(&base), local);
                for c in 1..=r {
                    let mut lists = base.clone();
                    lists[v as usize] = 1 << (c - 1);
                    expect_min(&g, r, Some(&lists), local);
                }
                let mut lists = base;
                lists[v as usize] = 0;
                let want = if d < ell { local + 1 } else { local };
                expect_min(&g, r, Some(&lists), want);
            }

            let (sub, _) = g.induced(&piece.verts);
            assert!(exact_treewidth(&sub).unwrap() <= r as u32);
        }

        for c_mask in 0..full(r) {
            let claim = r as u32 - c_mask.count_ones() + 1;
            let (g, h, _, f, _) = standalone_color_set(r, c_mask, r as usize);
            assert_eq!(h.packing[0].claim, claim);

            // piece minimum is exactly (r - |C|) + 1, with or without the
            // central clique pinning the internal states
            assert!(matches!(
                induced_outcome(&g, &h.packing[0].verts, r, None, claim - 1),
                DeletionOutcome::ExceedsCap
            ));
            assert_eq!(
                induced_outcome(&g, &h.packing[0].verts, r, None, claim).expect_cost(),
                claim
            );
            let lists = lists_under_central_coloring(&g, &f, r);
            assert_eq!(
                induced_outcome(&g, &h.packing[0].verts, r, Some(&lists), claim).expect_cost(),
                claim
            );

            let (sub, _) = g.induced(&h.packing[0].verts);
            assert!(exact_treewidth(&sub).unwrap() <= r as u32);

            // blocking sweep: the head is deletable at local cost exactly
            // when the colors kept on the twinclass all lie in the allowed set
            for u_size in [1usize, r as usize] {
                if c_mask.count_ones() as usize > u_size {
                    continue;
                }
                let (g, h, us, f, v) = standalone_color_set(r, c_mask, u_size);
                let claim = h.packing[0].claim;
                let base = lists_under_central_coloring(&g, &f, r);
                for kept_mask in 0..=full(r) {
                    let kept = kept_mask.count_ones() as usize;
                    if kept > u_size {
                        continue;
                    }
                    let d = u_size - kept;
                    let mut lists = base.clone();
                    let mut colors = (1..=r).filter(|c| kept_mask & (1 << (c - 1)) != 0);
                    for (i, &u) in us.iter().enumerate() {
                        lists[u as usize] =
                            if i < d { 0 } else { 1 << (colors.next().unwrap() - 1) };
                    }
                    let local = d as u32 + claim;
                    expect_min(&g, r, Some(&lists), local);
                    for c in 1..=r {
                        let mut with_color = lists.clone();
                        with_color[v as usize] = 1 << (c - 1);
                        expect_min(&g, r, Some(&with_color), local);
                    }
                    lists[v as usize] = 0;
                    let blocked = kept_mask & !c_mask != 0;
                    let want = if blocked { local + 1 } else { local };
                    expect_min(&g, r, Some(&lists), want);
                }
            }
        }
    }
    pass(4, "thick-arrow and color-set lemmas verified over all boundary conditions, widths within r");
}

#[test]
fn c05_vc_reduction_is_equivalent_on_small_hitting_set_instances() {
    let mut cases: Vec<HittingSetInstance> = vec![
        // one element, one set, both answers
        HittingSetInstance::new(1, vec![vec![0]], 0).unwrap(),
        HittingSetInstance::new(1, vec![vec![0]], 1).unwrap(),
        // duplicates and an identical family
        HittingSetInstance::new(3, vec![vec![0, 1], vec![0, 1]], 1).unwrap(),
        HittingSetInstance::new(6, vec![vec![0, 1, 2]; 5], 1).unwrap(),
        // disjoint singletons right at and below the threshold
        HittingSetInstance::new(3, vec![vec![0], vec![1], vec![2]], 2).unwrap(),
        HittingSetInstance::new(3, vec![vec![0], vec![1], vec![2]], 3).unwrap(),
        // budget zero with work to do
        HittingSetInstance::new(4, vec![vec![1, 2, 3]], 0).unwrap(),
        // crossing triples over the full universe
        HittingSetInstance::new(6, vec![vec![0, 1, 2], vec![3, 4, 5], vec![0, 3], vec![1, 4], vec![2, 5]], 2).unwrap(),
        HittingSetInstance::new(6, vec![vec![0, 1, 2], vec![3, 4, 5], vec![0, 3], vec![1, 4], vec![2, 5]], 3).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    while cases.len() < 209 {
        let u = rng.random_range(1..=6u32);
        let m = rng.random_range(1..=5usize);
        let sets: Vec<Vec<u32>> = (0..m)
            .map(|_| {
                let q = rng.random_range(1..=3.min(u as usize));
                let mut pool: Vec<u32> = (0..u).collect();
                pool.shuffle(&mut rng);
                let mut s = pool[..q].to_vec();
                s.sort_unstable();
                s
            })
            .collect();
        let t = rng.random_range(0..=u);
        cases.push(HittingSetInstance::new(u, sets, t).unwrap());
    }

    for (i, h) in cases.iter().enumerate() {
        assert!(h.q() <= 3 && h.universe <= 6 && h.sets.len() <= 5);
        let best_hit = solve_exact(ProblemKind::HittingSet, &ProblemInput::Sets(h)).unwrap();
        let inst = build_vc_reduction(h).unwrap();
        let best_cover =
            solve_exact(ProblemKind::VertexCover, &ProblemInput::Graph(&inst.graph)).unwrap();

        let extra: u32 = h.sets.iter().map(|s| 2 * s.len() as u32).sum();
        assert_eq!(inst.budget, h.budget + extra);
        assert_eq!(
            best_hit.value <= h.budget,
            best_cover.value <= inst.budget,
            "case {}: hitting optimum {} vs budget {}, cover optimum {} vs budget {}",
            i,
            best_hit.value,
            h.budget,
            best_cover.value,
            inst.budget
        );

        if best_cover.value <= inst.budget {
            let hitting = extract_hitting_set(&inst, &best_cover.witness).unwrap();
            assert!(hitting.len() as u32 <= h.budget);
            assert!(h.is_hit_by(&hitting));

            // and back: the canonical cover spends within the lifted budget
            let y = forward_vertex_cover(&inst, &hitting).unwrap();
            assert!(y.len() as u32 <= inst.budget);
            let mut in_y = vec![false; inst.graph.n()];
            for &v in &y {
                in_y[v as usize] = true;
            }
            assert!(inst.graph.edges().all(|(u, v)| in_y[u as usize] || in_y[v as usize]));
        }
    }
    pass(5, "hitting set and lifted vertex cover agree on 209 small instances, extraction round-trips");
}

#[test]
fn c06_maxcut_and_clique_free_corollaries_match_oracles_exhaustively() {
    for n in 1..=5usize {
        let pairs: Vec<(u32, u32)> = (0..n as u32)
            .flat_map(|u| (u + 1..n as u32).map(move |v| (u, v)))
            .collect();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<(u32, u32)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::with_edges(n, &edges);
            let cover =
                solve_exact(ProblemKind::VertexCover, &ProblemInput::Graph(&g)).unwrap().value;

            let red = build_maxcut_reduction(&g, &[]);
            let cut =
                solve_exact(ProblemKind::MaxCut, &ProblemInput::Graph(&red.graph)).unwrap().value;
            // the maximum cut lands exactly on the target for the true
            // cover size, which pins the whole threshold family
            assert_eq!(
                cut as u64,
                red.cut_target(cover),
                "n={} mask={:b}: cover {}",
                n,
                mask,
                cover
            );

            let (g3, _) = build_krfree_reduction(&g, 3);
            let tri = solve_exact(ProblemKind::KrFreeDeletion(3), &ProblemInput::Graph(&g3))
                .unwrap()
                .value;
            assert_eq!(tri, cover, "n={} mask={:b}", n, mask);
        }
    }
    pass(6, "max-cut targets and triangle-free deletion match vertex cover on all graphs up to 5 vertices");
}

#[test]
fn c07_ds_doubling_preserves_domination_and_quotients_back() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen = 0;
    while seen < 300 {
        let n = rng.random_range(2..=8usize);
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                if rng.random_bool(0.4) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::with_edges(n, &edges);
        if !g.is_connected() {
            continue;
        }
        seen += 1;

        let gd = build_ds_doubling(&g).unwrap();
        let ds = solve_exact(ProblemKind::DominatingSet, &ProblemInput::Graph(&gd))
            .unwrap()
            .value;
        let tds = solve_exact(ProblemKind::TotalDominatingSet, &ProblemInput::Graph(&g))
            .unwrap()
            .value;
        assert_eq!(ds, tds, "graph {} with {} vertices", seen, n);

        // quotient by twin classes, blocks led by their original vertex,
        // recovers an induced subgraph of the input
        let part = twinclass_partition(&gd);
        let mut reps = Vec::new();
        for blk in &part.blocks {
            assert_eq!(classify_twinclass(&gd, blk), Ok(TwinClassKind::FalseTwins));
            let rep = *blk.iter().min().unwrap();
            assert!((rep as usize) < g.n());
            reps.push(rep);
        }
        let q = quotient(&gd, &part).unwrap();
        let (ind, _) = g.induced(&reps);
        assert_eq!(q.n(), ind.n());
        assert_eq!(q.edges().collect::<Vec<_>>(), ind.edges().collect::<Vec<_>>());
    }
    pass(7, "doubling preserves domination numbers and quotients back, 300 random connected graphs");
}

#[test]
fn c08_sat_reductions_generate_verify_and_spend_exactly_the_budget() {
    let start = Instant::now();

    // satisfiable formulas over every shape up to 2 variables, 2 clauses,
    // with a designated satisfying assignment
    let sat_cases: Vec<(CnfFormula, Vec<bool>)> = vec![
        (CnfFormula::new(1, vec![vec![1]]).unwrap(), vec![true]),
        (CnfFormula::new(1, vec![vec![-1], vec![-1, 1]]).unwrap(), vec![false]),
        (CnfFormula::new(2, vec![vec![1, 2]]).unwrap(), vec![true, false]),
        (CnfFormula::new(2, vec![vec![1, 2], vec![-1, 2]]).unwrap(), vec![false, true]),
    ];
    // and one unsatisfiable shape, generated and verified but not forwarded
    let unsat = CnfFormula::new(2, vec![vec![1], vec![-1]]).unwrap();

    for (f, tau) in &sat_cases {
        let inst = build_sparse_reduction(f, 2, 1, DEFAULT_MAX_VERTICES).unwrap();
        let rep = verify_reduction_instance(&inst);
        assert!(rep.pass(), "sparse on {:?}:\n{}", f.clauses, rep.render_text());

        let sol = forward_solution(&inst, tau).unwrap();
        assert_eq!(sol.cost(), inst.budget, "forward solutions spend exactly the budget");
        let rep = verify_dtc_solution(&inst.graph, &sol, 2, inst.budget);
        assert!(rep.pass(), "{}", rep.render_text());
    }
    let inst = build_sparse_reduction(&unsat, 2, 1, DEFAULT_MAX_VERTICES).unwrap();
    assert!(verify_reduction_instance(&inst).pass());

    // dense at the single-variable scale
    let (f, tau) = &sat_cases[0];
    let inst = build_dense_reduction(f, 2, 1, DEFAULT_MAX_VERTICES).unwrap();
    let rep = verify_reduction_instance(&inst);
    assert!(rep.pass(), "dense:\n{}", rep.render_text());
    let sol = forward_solution(&inst, tau).unwrap();
    assert_eq!(sol.cost(), inst.budget);
    let rep = verify_dtc_solution(&inst.graph, &sol, 2, inst.budget);
    assert!(rep.pass(), "{}", rep.render_text());

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 600, "desk-scale reductions took {:?}", elapsed);

    // peak RSS if the kernel reports it; the whole test process stays
    // far under the 4 GB line
    if let Ok(status) = std::fs::read_to_string("/proc/self/status") {
        if let Some(line) = status.lines().find(|l| l.starts_with("VmHWM:")) {
            let kb: u64 = line
                .split_whitespace()
                .nth(1)
                .and_then(|t| t.parse().ok())
                .expect("VmHWM is in kB");
            assert!(kb < 4 * 1024 * 1024, "peak memory {} kB", kb);
        }
    }
    pass(8, "desk-scale sparse and dense instances verify, forward witnesses cost exactly b");
}

#[test]
fn c09_tds_construction_checks_out_at_two_variables() {
    let cases: Vec<(CnfFormula, Vec<bool>)> = vec![
        (CnfFormula::new(2, vec![vec![1]]).unwrap(), vec![true, false]),
        (CnfFormula::new(2, vec![vec![1, 2], vec![-1]]).unwrap(), vec![false, true]),
    ];
    for (f, tau) in &cases {
        let m = f.num_clauses() as u32;
        let inst = build_tds_reduction(f).unwrap();
        // 4 m (3 n/2 + 1)(n/2) + 2 at n = 2
        assert_eq!(inst.budget, 16 * m + 2);

        let x = cwdel::reductions::ds::forward_tds_solution(&inst, tau).unwrap();
        assert_eq!(x.len() as u32, inst.budget, "forward set spends exactly the budget");
        let rep = verify_problem_solution(
            ProblemKind::TotalDominatingSet,
            &ProblemInput::Graph(&inst.graph),
            &x,
            inst.budget,
        );
        assert!(rep.pass(), "{}", rep.render_text());

        let width = verify_decomposition(&inst.graph, &inst.decomposition).unwrap();
        assert!(width <= inst.pairs as u32 + 21);
        assert!(inst.decomposition.is_path());
    }

    // structure lemma on one interior block: exactly four surviving local
    // sets of size 4, each a state pair plus its clique vertex and y1
    let inst = build_tds_reduction(&cases[0].0).unwrap();
    let blk = inst.blocks[0][1];
    let verts: Vec<u32> = blk.verts().collect();
    let (g, map) = inst.graph.induced(&verts);
    let local = |v: u32| map.binary_search(&v).unwrap() as u32;
    assert_eq!(g.n(), 18);

    let skip = [local(blk.p[0]), local(blk.p[3])];
    let dominated = |g: &Graph, mask: u64, skip: &[u32]| {
        g.vertices()
            .all(|v| skip.contains(&v) || g.neighbors(v).iter().any(|&w| mask >> w & 1 == 1))
    };
    let mut survivors = Vec::new();
    for mask in 0u64..1 << 18 {
        if mask.count_ones() > 4 {
            continue;
        }
        if dominated(&g, mask, &skip) {
            assert_eq!(mask.count_ones(), 4, "no smaller set may survive");
            survivors.push(mask);
        }
    }
    let state_mask = |blk: &TdsBlock, s: usize| {
        STATES[s]
            .iter()
            .map(|&pos| local(blk.p[pos]))
            .chain([local(blk.z[s]), local(blk.y[0])])
            .fold(0u64, |m, v| m | 1 << v)
    };
    let mut expected: Vec<u64> = (0..4).map(|s| state_mask(&blk, s)).collect();
    survivors.sort_unstable();
    expected.sort_unstable();
    assert_eq!(survivors, expected);

    // state order on two consecutive blocks of one row
    let b1 = inst.blocks[0][1];
    let b2 = inst.blocks[0][2];
    let verts: Vec<u32> = b1.verts().chain(b2.verts()).collect();
    let (g, map) = inst.graph.induced(&verts);
    let local = |v: u32| map.binary_search(&v).unwrap() as u32;
    let state_mask = |blk: &TdsBlock, s: usize| {
        STATES[s]
            .iter()
            .map(|&pos| local(blk.p[pos]))
            .chain([local(blk.z[s]), local(blk.y[0])])
            .fold(0u64, |m, v| m | 1 << v)
    };
    let skip = [local(b1.p[0]), local(b2.p[3])];
    let mut valid = Vec::new();
    for s in 0..4 {
        for s2 in 0..4 {
            if dominated(&g, state_mask(&b1, s) | state_mask(&b2, s2), &skip) {
                valid.push((s + 1, s2 + 1));
            }
        }
    }
    assert_eq!(
        valid,
        vec![(1, 1), (2, 1), (2, 2), (3, 1), (3, 3), (4, 1), (4, 2), (4, 3), (4, 4)],
        "downward transitions only, and (3,2) in particular is forbidden"
    );

    pass(9, "tds instances verify at exact budget and width, block states and transitions enumerate as derived");
}

#[test]
fn c10_group_sizes_are_as_derived_and_families_are_large_enough() {
    assert_eq!(choose_p_dense(1, 2), 8);
    assert_eq!(choose_p_sparse(1, 2), 3);

    for (p0, r) in [(1u32, 2u8), (2, 2), (1, 3)] {
        let p = choose_p_dense(p0, r);
        let members = enumerate_dense_members(r, p);
        assert!(
            members.len() as u128 >= 1u128 << p0,
            "dense r={} p0={}: {} members",
            r,
            p0,
            members.len()
        );
        let p = choose_p_sparse(p0, r);
        let members = enumerate_sparse_members(r, p);
        assert!(
            members.len() as u128 >= 1u128 << p0,
            "sparse r={} p0={}: {} members",
            r,
            p0,
            members.len()
        );
    }
    pass(10, "group size formulas give the derived values and enough partial solutions per group");
}
