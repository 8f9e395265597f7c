//! Hitting set to vertex cover via triangle paths, plus the two corollary
//! constructions that piggyback on the vertex cover bound: the max-cut
//! overlay and the clique replacement for K_r-free deletion.

use super::dtc::embed;
use super::{HittingSetInstance, PackingEntry, ReductionInstance, ReductionKind};
use crate::gadgets::InstanceBuilder;
use crate::graph::{Graph, TreeDecomposition};

/// Construction layout needed by extract_hitting_set.
#[derive(Clone, Debug)]
pub struct VcLayout {
    pub instance: HittingSetInstance,
    /// central vertex per universe element
    pub w: Vec<u32>,
    pub paths: Vec<TrianglePath>,
}

/// Triangle path for one set: a_s rides on top of the triangle
/// {a_s, b_2s, b_2s+1} and the b vertices form a path.
#[derive(Clone, Debug)]
pub struct TrianglePath {
    /// one per set element, wired to that element's central vertex
    pub a: Vec<u32>,
    /// b_1 .. b_{2p+2} in path order
    pub b: Vec<u32>,
}

impl TrianglePath {
    /// 1-based vertex b_s.
    fn b1(&self, s: usize) -> u32 {
        self.b[s - 1]
    }
}

/// Builds the vertex cover instance: an independent central vertex per
/// universe element and a triangle path per set, wired so that covering a
/// path within its packing bound forces a chosen central neighbor. The
/// budget is t plus 2 p_j per set.
pub fn build_vc_reduction(h: &HittingSetInstance) -> Result<ReductionInstance, String> {
    h.validate()?;
    let mut b = InstanceBuilder::new();
    let w: Vec<u32> = (0..h.universe)
        .map(|i| b.add_vertex(&format!("w{}", i + 1)))
        .collect();

    let mut paths = Vec::with_capacity(h.sets.len());
    let mut packing = Vec::new();
    let mut witnesses = Vec::new();
    let mut budget = h.budget;
    for (j, set) in h.sets.iter().enumerate() {
        let p = set.len();
        let a: Vec<u32> = (0..p)
            .map(|s| b.add_vertex(&format!("a{}_{}", j + 1, s + 1)))
            .collect();
        let bs: Vec<u32> = (0..2 * p + 2)
            .map(|s| b.add_vertex(&format!("b{}_{}", j + 1, s + 1)))
            .collect();
        for k in 0..2 * p + 1 {
            b.add_edge(bs[k], bs[k + 1]);
        }
        let path = TrianglePath { a, b: bs };
        for s in 1..=p {
            let tri = [path.a[s - 1], path.b1(2 * s), path.b1(2 * s + 1)];
            b.add_edge(tri[0], tri[1]);
            b.add_edge(tri[0], tri[2]);
            b.add_edge(path.a[s - 1], w[set[s - 1] as usize]);
            // any cover takes two vertices of a triangle
            packing.push(PackingEntry {
                claim: 2,
                verts: {
                    let mut v = tri.to_vec();
                    v.sort_unstable();
                    v
                },
            });
        }
        budget += 2 * p as u32;

        // width-2 path decomposition: {b_{2s-1}, b_{2s}} bags alternate with
        // the triangle bags
        let mut bags = Vec::with_capacity(2 * p + 1);
        for s in 1..=p {
            bags.push(vec![path.b1(2 * s - 1), path.b1(2 * s)]);
            bags.push(vec![path.a[s - 1], path.b1(2 * s), path.b1(2 * s + 1)]);
        }
        bags.push(vec![path.b1(2 * p + 1), path.b1(2 * p + 2)]);
        witnesses.push(TreeDecomposition::path(bags));
        paths.push(path);
    }

    let graph = b.finish();
    let cost_packing: u32 = packing.iter().map(|e| e.claim).sum();
    Ok(ReductionInstance {
        kind: ReductionKind::VertexCover,
        graph,
        budget,
        modulator: w.iter().map(|&v| vec![v]).collect(),
        packing,
        cost_packing,
        central: Vec::new(),
        kappas: Vec::new(),
        witnesses,
        witness_width: 2,
        params: None,
        dtc: None,
        vc: Some(Box::new(VcLayout {
            instance: h.clone(),
            w,
            paths,
        })),
    })
}

fn is_vertex_cover(g: &Graph, in_y: &[bool]) -> bool {
    g.edges().all(|(u, v)| in_y[u as usize] || in_y[v as usize])
}

/// Reads a hitting set off a vertex cover within budget. Any path that
/// overspends its two-per-triangle share is first repaired: a central
/// neighbor joins the cover and the path falls back to the canonical cover
/// that leans on it.
pub fn extract_hitting_set(inst: &ReductionInstance, y: &[u32]) -> Result<Vec<u32>, String> {
    let layout = inst.vc.as_deref().ok_or("instance has no covering layout")?;
    let g = &inst.graph;
    let mut in_y = vec![false; g.n()];
    for &v in y {
        if v as usize >= g.n() {
            return Err(format!("cover mentions unknown vertex {}", v));
        }
        in_y[v as usize] = true;
    }
    let size = in_y.iter().filter(|&&b| b).count();
    if size > inst.budget as usize {
        return Err(format!("cover has {} vertices, budget is {}", size, inst.budget));
    }
    if !is_vertex_cover(g, &in_y) {
        return Err("input is not a vertex cover".into());
    }

    let h = &layout.instance;
    loop {
        let over = layout.paths.iter().enumerate().find(|(_, path)| {
            let used = path
                .a
                .iter()
                .chain(&path.b)
                .filter(|&&v| in_y[v as usize])
                .count();
            used > 2 * path.a.len()
        });
        let Some((j, path)) = over else { break };
        // lean on some central neighbor, then retake the path with the
        // canonical cover of the same size as the lower bound
        let p = path.a.len();
        in_y[layout.w[h.sets[j][0] as usize] as usize] = true;
        let s_star = (1..=p)
            .find(|&s| in_y[layout.w[h.sets[j][s - 1] as usize] as usize])
            .expect("the neighbor just added makes some s eligible");
        for &v in path.a.iter().chain(&path.b) {
            in_y[v as usize] = false;
        }
        for s in 1..=p {
            if s != s_star {
                in_y[path.a[s - 1] as usize] = true;
            }
        }
        for s in 1..=s_star {
            in_y[path.b1(2 * s) as usize] = true;
        }
        for s in s_star..=p {
            in_y[path.b1(2 * s + 1) as usize] = true;
        }
        debug_assert!(is_vertex_cover(g, &in_y), "repair must preserve the cover");
        debug_assert!(
            in_y.iter().filter(|&&b| b).count() <= size,
            "repair must not grow the cover"
        );
    }

    let hitting: Vec<u32> = (0..h.universe)
        .filter(|&i| in_y[layout.w[i as usize] as usize])
        .collect();
    debug_assert!(h.is_hit_by(&hitting));
    debug_assert!(hitting.len() <= h.budget as usize);
    Ok(hitting)
}

/// Canonical cover certifying a hitting set: the chosen central vertices
/// plus the repaired path covers leaning on them.
pub fn forward_vertex_cover(
    inst: &ReductionInstance,
    hitting: &[u32],
) -> Result<Vec<u32>, String> {
    let layout = inst.vc.as_deref().ok_or("instance has no covering layout")?;
    let h = &layout.instance;
    if !h.is_hit_by(hitting) {
        return Err("input does not hit every set".into());
    }
    if hitting.len() > h.budget as usize {
        return Err(format!(
            "hitting set has {} elements, budget is {}",
            hitting.len(),
            h.budget
        ));
    }
    let mut y: Vec<u32> = hitting.iter().map(|&i| layout.w[i as usize]).collect();
    for (j, path) in layout.paths.iter().enumerate() {
        let p = path.a.len();
        let s_star = (1..=p)
            .find(|&s| hitting.contains(&h.sets[j][s - 1]))
            .expect("a hitting set meets every set");
        for s in 1..=p {
            if s != s_star {
                y.push(path.a[s - 1]);
            }
        }
        for s in 1..=s_star {
            y.push(path.b1(2 * s));
        }
        for s in s_star..=p {
            y.push(path.b1(2 * s + 1));
        }
    }
    Ok(y)
}

/// Max-cut overlay. The original edges disappear; an apex x sees every
/// original vertex and each former edge {u,v} leaves a 5-edge widget on
/// fresh vertices e_u, e_v.
#[derive(Clone, Debug)]
pub struct MaxCutReduction {
    pub graph: Graph,
    /// the input modulator plus the apex
    pub modulator: Vec<u32>,
    /// 4 |E(G)|
    pub base: u64,
    pub n_orig: u32,
}

impl MaxCutReduction {
    /// Cut size reached exactly when the original graph has a vertex cover
    /// of size at most vc_budget.
    pub fn cut_target(&self, vc_budget: u32) -> u64 {
        self.base + self.n_orig as u64 - vc_budget as u64
    }
}

pub fn build_maxcut_reduction(g: &Graph, x: &[u32]) -> MaxCutReduction {
    let mut b = InstanceBuilder::new();
    for v in g.vertices() {
        b.add_vertex(g.tag(v));
    }
    let apex = b.add_vertex("x");
    for v in g.vertices() {
        b.add_edge(apex, v);
    }
    let mut edges = 0u64;
    for (u, v) in g.edges() {
        let eu = b.add_vertex(&format!("e{}_{}u", u + 1, v + 1));
        let ev = b.add_vertex(&format!("e{}_{}v", u + 1, v + 1));
        b.add_edge(apex, eu);
        b.add_edge(apex, ev);
        b.add_edge(eu, ev);
        b.add_edge(eu, u);
        b.add_edge(ev, v);
        edges += 1;
    }
    let mut modulator = x.to_vec();
    modulator.push(apex);
    MaxCutReduction {
        graph: b.finish(),
        modulator,
        base: 4 * edges,
        n_orig: g.n() as u32,
    }
}

/// Replaces every edge by an r-clique. Budgets carry over unchanged: a
/// vertex cover of size b exists exactly when b deletions make the result
/// K_r-free. Returns the new graph and one clique per original edge, the
/// two endpoints first.
pub fn build_krfree_reduction(g: &Graph, r: u8) -> (Graph, Vec<Vec<u32>>) {
    assert!(r >= 3, "need r >= 3");
    let mut b = InstanceBuilder::new();
    embed(&mut b, g);
    let mut cliques = Vec::new();
    for (u, v) in g.edges() {
        let mut clique = vec![u, v];
        for _ in 2..r {
            clique.push(b.add_vertex("kc"));
        }
        b.add_clique(&clique);
        cliques.push(clique);
    }
    (b.finish(), cliques)
}

/// Lifts a decomposition of a subgraph onto the clique-replaced graph: each
/// clique gets a degree-1 bag next to a bag holding its surviving endpoints.
/// `dropped` lists modulator vertices to leave out of the new bags; a clique
/// with no surviving anchor hangs off the first bag.
pub fn lift_krfree_decomposition(
    d: &TreeDecomposition,
    cliques: &[Vec<u32>],
    dropped: &[u32],
) -> Result<TreeDecomposition, String> {
    let mut bags = d.bags.clone();
    let mut edges = d.edges.clone();
    if bags.is_empty() {
        bags.push(Vec::new());
    }
    let orig = bags.len();
    for clique in cliques {
        let (u, v) = (clique[0], clique[1]);
        let u_in = !dropped.contains(&u);
        let v_in = !dropped.contains(&v);
        let anchor = match (u_in, v_in) {
            (true, true) => bags[..orig]
                .iter()
                .position(|bag| bag.contains(&u) && bag.contains(&v))
                .ok_or_else(|| format!("no bag holds edge ({}, {})", u, v))?,
            (true, false) => bags[..orig]
                .iter()
                .position(|bag| bag.contains(&u))
                .ok_or_else(|| format!("no bag holds vertex {}", u))?,
            (false, true) => bags[..orig]
                .iter()
                .position(|bag| bag.contains(&v))
                .ok_or_else(|| format!("no bag holds vertex {}", v))?,
            (false, false) => 0,
        };
        let bag: Vec<u32> = clique
            .iter()
            .copied()
            .filter(|c| !dropped.contains(c))
            .collect();
        let idx = bags.len();
        bags.push(bag);
        edges.push((anchor, idx));
    }
    Ok(TreeDecomposition { bags, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{verify_decomposition, verify_decomposition_on};

    fn pair_instance(t: u32) -> HittingSetInstance {
        HittingSetInstance::new(2, vec![vec![0, 1]], t).unwrap()
    }

    fn min_vertex_cover(g: &Graph) -> u32 {
        let n = g.n();
        assert!(n <= 20);
        (0u32..1 << n)
            .filter(|mask| {
                g.edges()
                    .all(|(u, v)| mask & (1 << u) != 0 || mask & (1 << v) != 0)
            })
            .map(|mask| mask.count_ones())
            .min()
            .unwrap()
    }

    fn max_cut(g: &Graph) -> u64 {
        let n = g.n();
        assert!(n <= 20);
        (0u32..1 << n)
            .map(|mask| {
                g.edges()
                    .filter(|&(u, v)| (mask >> u) & 1 != (mask >> v) & 1)
                    .count() as u64
            })
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn pair_instance_matches_hand_counts() {
        let inst = build_vc_reduction(&pair_instance(1)).unwrap();
        assert_eq!(inst.graph.n(), 10);
        assert_eq!(inst.budget, 5);
        assert_eq!(min_vertex_cover(&inst.graph), 5);
        assert_eq!(inst.modulator.len(), 2);
        for d in &inst.witnesses {
            let mut verts: Vec<u32> = d.bags.iter().flatten().copied().collect();
            verts.sort_unstable();
            verts.dedup();
            let w = verify_decomposition_on(&inst.graph, d, &verts).unwrap();
            assert_eq!(w, 2);
        }
    }

    #[test]
    fn short_budget_misses_the_cover() {
        let inst = build_vc_reduction(&pair_instance(0)).unwrap();
        assert_eq!(inst.budget, 4);
        assert!(min_vertex_cover(&inst.graph) > inst.budget);
    }

    #[test]
    fn cover_round_trips_to_the_hitting_set() {
        let inst = build_vc_reduction(&pair_instance(1)).unwrap();
        let y = forward_vertex_cover(&inst, &[0]).unwrap();
        assert_eq!(y.len() as u32, inst.budget);
        let h = extract_hitting_set(&inst, &y).unwrap();
        assert_eq!(h, vec![0]);
    }

    #[test]
    fn repair_trades_a_path_vertex_for_a_central_one() {
        let inst = build_vc_reduction(&pair_instance(1)).unwrap();
        let layout = inst.vc.as_deref().unwrap();
        let path = &layout.paths[0];
        // overspend the path: both tops and three b's, no central vertex
        let y = vec![
            path.a[0],
            path.a[1],
            path.b1(2),
            path.b1(4),
            path.b1(6),
        ];
        let h = extract_hitting_set(&inst, &y).unwrap();
        assert_eq!(h, vec![0]);
    }

    #[test]
    fn extract_rejects_bad_covers() {
        let inst = build_vc_reduction(&pair_instance(1)).unwrap();
        assert!(extract_hitting_set(&inst, &[]).is_err());
        let all: Vec<u32> = inst.graph.vertices().collect();
        assert!(extract_hitting_set(&inst, &all).is_err());
    }

    #[test]
    fn maxcut_overlay_tracks_the_cover_number() {
        let mut k2 = Graph::new(2);
        k2.add_edge(0, 1);
        let red = build_maxcut_reduction(&k2, &[]);
        assert_eq!(red.graph.n(), 5);
        assert_eq!(red.modulator, vec![2]);
        assert_eq!(max_cut(&red.graph), 5);
        assert_eq!(red.cut_target(min_vertex_cover(&k2)), 5);

        let mut k3 = Graph::new(3);
        k3.add_edge(0, 1);
        k3.add_edge(0, 2);
        k3.add_edge(1, 2);
        let red = build_maxcut_reduction(&k3, &[]);
        assert_eq!(max_cut(&red.graph), 13);
        assert_eq!(red.cut_target(min_vertex_cover(&k3)), 13);
    }

    #[test]
    fn clique_replacement_keeps_the_budget() {
        let mut k2 = Graph::new(2);
        k2.add_edge(0, 1);
        let (g3, cliques) = build_krfree_reduction(&k2, 3);
        assert_eq!(g3.n(), 3);
        assert_eq!(cliques, vec![vec![0, 1, 2]]);

        // a one-bag decomposition of K2 lifts to a width-2 one of K3
        let d = TreeDecomposition::path(vec![vec![0, 1]]);
        let lifted = lift_krfree_decomposition(&d, &cliques, &[]).unwrap();
        assert_eq!(verify_decomposition(&g3, &lifted).unwrap(), 2);
    }

    #[test]
    fn lift_handles_modulator_edges() {
        // star K_{1,2} with the center dropped: the cliques anchor at leaves
        let mut g = Graph::new(3);
        g.add_edge(0, 1);
        g.add_edge(0, 2);
        let (g3, cliques) = build_krfree_reduction(&g, 3);
        let d = TreeDecomposition::path(vec![vec![1], vec![2]]);
        let lifted = lift_krfree_decomposition(&d, &cliques, &[0]).unwrap();
        let verts: Vec<u32> = (1..g3.n() as u32).collect();
        assert!(verify_decomposition_on(&g3, &lifted, &verts).unwrap() <= 2);
    }
}
