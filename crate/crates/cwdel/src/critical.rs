//! Color-critical graphs: the Hajos merge operation and a family of
//! t-critical graphs of essentially any size, with path decomposition
//! witnesses of width t-1.
//!
//! The family is a chain of gamma blocks. Block l is a clique on
//! {a_l, a_{l+1}, c_{l,1}, ..., c_{l,t-3}}; a bridge vertex b_l sees all the
//! c's of its block, b_1 additionally sees a_1, b_gamma sees a_{gamma+1},
//! and consecutive b's are adjacent. For t = 3 this degenerates to the odd
//! cycle C_{2*gamma+1}, for gamma = 1 to K_t.

use crate::graph::{Graph, TreeDecomposition};

#[derive(Clone, Debug)]
pub struct CriticalGraph {
    pub graph: Graph,
    pub t: u32,
    pub gamma: u32,
    pub decomposition: TreeDecomposition,
}

/// Merges two graphs along an edge pair: both edges are removed, v and x
/// become one vertex s, and {w, y} is added. Result ids: G's vertices keep
/// their ids (s sits in v's slot), H's vertices follow in order, skipping x.
pub fn hajos_merge(
    g: &Graph,
    h: &Graph,
    edge_g: (u32, u32),
    edge_h: (u32, u32),
) -> Result<Graph, String> {
    let (v, w) = edge_g;
    let (x, y) = edge_h;
    if !g.has_edge(v, w) {
        return Err(format!("edge {{{},{}}} missing in the first graph", v, w));
    }
    if !h.has_edge(x, y) {
        return Err(format!("edge {{{},{}}} missing in the second graph", x, y));
    }
    let ng = g.n() as u32;
    let map_h = |z: u32| -> u32 {
        if z == x {
            v
        } else if z < x {
            ng + z
        } else {
            ng + z - 1
        }
    };
    let mut out = Graph::new(g.n() + h.n() - 1);
    for u in g.vertices() {
        out.set_tag(u, g.tag(u));
    }
    for z in h.vertices() {
        if z != x {
            out.set_tag(map_h(z), h.tag(z));
        }
    }
    for (a, b) in g.edges() {
        if (a, b) == (v.min(w), v.max(w)) {
            continue;
        }
        out.add_edge(a, b);
    }
    for (a, b) in h.edges() {
        if (a, b) == (x.min(y), x.max(y)) {
            continue;
        }
        out.add_edge(map_h(a), map_h(b));
    }
    out.add_edge(w, map_h(y));
    Ok(out)
}

/// Builds the t-critical chain graph with gamma blocks: (t-1)*gamma + 1
/// vertices, chromatic number t, and an attached path decomposition of
/// width exactly t-1.
pub fn build_critical(t: u32, gamma: u32) -> CriticalGraph {
    assert!(t >= 3, "need t >= 3");
    assert!(gamma >= 1, "need gamma >= 1");
    let inner = t - 3; // c vertices per block
    let n = (t - 1) * gamma + 1;
    let mut g = Graph::new(n as usize);

    let a = |l: u32| -> u32 { l - 1 }; // l in 1..=gamma+1
    let b = |l: u32| -> u32 { gamma + l }; // l in 1..=gamma
    let c = |l: u32, k: u32| -> u32 { 2 * gamma + 1 + (l - 1) * inner + (k - 1) };

    for l in 1..=gamma + 1 {
        g.set_tag(a(l), format!("a{}", l));
    }
    for l in 1..=gamma {
        g.set_tag(b(l), format!("b{}", l));
        for k in 1..=inner {
            g.set_tag(c(l, k), format!("c{}_{}", l, k));
        }
    }

    for l in 1..=gamma {
        // block clique on a_l, a_{l+1} and the block's c vertices
        let mut block = vec![a(l), a(l + 1)];
        block.extend((1..=inner).map(|k| c(l, k)));
        for i in 0..block.len() {
            for j in i + 1..block.len() {
                g.add_edge(block[i], block[j]);
            }
        }
        for k in 1..=inner {
            g.add_edge(b(l), c(l, k));
        }
        if l < gamma {
            g.add_edge(b(l), b(l + 1));
        }
    }
    g.add_edge(b(1), a(1));
    g.add_edge(b(gamma), a(gamma + 1));

    // bags alternate: block bag, then the bridge to the next block
    let mut bags: Vec<Vec<u32>> = Vec::with_capacity(2 * gamma as usize - 1);
    for l in 1..=gamma {
        let mut bag = vec![a(l), a(l + 1), b(l)];
        bag.extend((1..=inner).map(|k| c(l, k)));
        bags.push(bag);
        if l < gamma {
            bags.push(vec![b(l), b(l + 1), a(l + 1)]);
        }
    }

    CriticalGraph { graph: g, t, gamma, decomposition: TreeDecomposition::path(bags) }
}

/// Smallest member of the (r+1)-critical family with at least `min_size`
/// vertices; never overshoots by more than r.
pub fn pick_critical(r: u32, min_size: u32) -> CriticalGraph {
    assert!(r >= 2, "need r >= 2");
    assert!(min_size >= 1);
    let gamma = if min_size <= 1 { 1 } else { (min_size - 1).div_ceil(r) };
    build_critical(r + 1, gamma)
}
