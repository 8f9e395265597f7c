//! Dominating set via false-twin doubling, and the total dominating set
//! instance built from a CNF formula out of path segments, guard vertices
//! and per-segment state cliques.

use super::CnfFormula;
use crate::gadgets::InstanceBuilder;
use crate::graph::{Graph, TreeDecomposition};

/// Adds a false twin for every vertex: v' gets exactly the neighborhood of
/// v, so a dominating set of the result corresponds to a total dominating
/// set of the input. Twin of v is vertex n + v.
pub fn build_ds_doubling(g: &Graph) -> Result<Graph, String> {
    if g.n() < 2 {
        return Err(format!("doubling needs at least 2 vertices, got {}", g.n()));
    }
    if !g.is_connected() {
        return Err("doubling needs a connected graph".into());
    }
    let n = g.n() as u32;
    let mut gd = Graph::new(2 * g.n());
    for v in g.vertices() {
        let tag = g.tag(v);
        if !tag.is_empty() {
            gd.set_tag(v, tag);
            gd.set_tag(n + v, format!("{}'", tag));
        }
    }
    for (u, v) in g.edges() {
        gd.add_edge(u, v);
        gd.add_edge(u, n + v);
        gd.add_edge(n + u, v);
        gd.add_edge(n + u, n + v);
    }
    Ok(gd)
}

/// The four ways a set can pick two path vertices of a segment so that the
/// segment interior stays dominated, as 0-based positions: state 1 takes
/// the first two vertices, state 2 the outer two, state 3 the middle two,
/// state 4 the last two.
pub const STATES: [[usize; 2]; 4] = [[0, 1], [0, 3], [1, 2], [2, 3]];

/// Fixed bijection from the assignment of a variable pair to the 0-based
/// state index on its path segments.
pub fn kappa(first: bool, second: bool) -> usize {
    2 * (first as usize) + second as usize
}

/// Vertex ids of one block: a four-vertex path segment, one guard per
/// segment vertex, and the state cliques. Connector zhat[s] watches the
/// segment vertices outside state s and hangs off clique vertex z[s]; the
/// z's plus y[0] form a clique and y[1] pins y[0] into any solution.
#[derive(Clone, Copy, Debug)]
pub struct TdsBlock {
    pub p: [u32; 4],
    pub q: [u32; 4],
    pub zhat: [u32; 4],
    pub z: [u32; 4],
    pub y: [u32; 2],
}

impl TdsBlock {
    pub fn verts(&self) -> impl Iterator<Item = u32> + '_ {
        self.p
            .iter()
            .chain(&self.q)
            .chain(&self.zhat)
            .chain(&self.z)
            .chain(&self.y)
            .copied()
    }
}

/// Output of build_tds_reduction: the graph, the budget, a path
/// decomposition witness, and enough layout to read forward solutions off
/// a satisfying assignment.
#[derive(Clone, Debug)]
pub struct TdsInstance {
    pub graph: Graph,
    pub budget: u32,
    pub decomposition: TreeDecomposition,
    /// input formula before any padding
    pub formula: CnfFormula,
    /// variable pairs after padding to an even count
    pub pairs: usize,
    pub regions: usize,
    /// segments per path, m per region
    pub segments: usize,
    /// blocks[i][l] is the block of pair i at segment l
    pub blocks: Vec<Vec<TdsBlock>>,
    /// clause_verts[j][g] watches clause j in region g
    pub clause_verts: Vec<Vec<u32>>,
    /// h1, h2, h1', h2'; h2 and h2' are degree-1 pins for h1 and h1'
    pub guards: [u32; 4],
}

fn add_block(b: &mut InstanceBuilder, i: usize, ell: usize) -> TdsBlock {
    let tag = |kind: &str, j: usize| format!("{}{}_{}_{}", kind, i + 1, ell + 1, j);
    let p: [u32; 4] = std::array::from_fn(|j| b.add_vertex(&tag("p", j + 1)));
    let q: [u32; 4] = std::array::from_fn(|j| b.add_vertex(&tag("q", j + 1)));
    let zhat: [u32; 4] = std::array::from_fn(|s| b.add_vertex(&tag("zh", s + 1)));
    let z: [u32; 4] = std::array::from_fn(|s| b.add_vertex(&tag("z", s + 1)));
    let y: [u32; 2] = std::array::from_fn(|j| b.add_vertex(&tag("y", j + 1)));

    for w in p.windows(2) {
        b.add_edge(w[0], w[1]);
    }
    for j in 0..4 {
        for k in 0..4 {
            if k != j {
                b.add_edge(q[j], p[k]);
            }
        }
    }
    for s in 0..4 {
        for k in 0..4 {
            if !STATES[s].contains(&k) {
                b.add_edge(zhat[s], p[k]);
            }
        }
        b.add_edge(zhat[s], z[s]);
    }
    let mut clique = z.to_vec();
    clique.push(y[0]);
    b.add_clique(&clique);
    b.add_edge(y[0], y[1]);
    TdsBlock { p, q, zhat, z, y }
}

/// Does assigning (first, second) to the two variables of the given
/// 0-based pair make some literal of the clause true?
fn pair_satisfies(clause: &[i32], pair: usize, first: bool, second: bool) -> bool {
    let v1 = 2 * pair as u32 + 1;
    clause.iter().any(|&lit| {
        let var = lit.unsigned_abs();
        let val = if var == v1 {
            first
        } else if var == v1 + 1 {
            second
        } else {
            return false;
        };
        (lit > 0) == val
    })
}

/// Vertex count build_tds_reduction would produce, without building it.
pub fn tds_vertex_count(f: &CnfFormula) -> u64 {
    let m = f.clauses.len() as u64;
    let pairs = (f.num_vars as u64 + (f.num_vars as u64 % 2)) / 2;
    let regions = 3 * pairs + 1;
    let segments = m * regions;
    18 * pairs * segments + m * regions + 4
}

/// Compiles a CNF formula into a total dominating set instance. Each
/// variable pair drives one row of blocks, one block per segment; regions
/// repeat the clause columns often enough that some region survives all
/// state downgrades. A formula with an odd variable count gets a dummy
/// variable that no clause mentions.
pub fn build_tds_reduction(f: &CnfFormula) -> Result<TdsInstance, String> {
    f.validate()?;
    if f.clauses.is_empty() {
        return Err("formula has no clauses".into());
    }
    let m = f.clauses.len();
    let padded = f.num_vars as usize + (f.num_vars as usize % 2);
    let pairs = padded / 2;
    let regions = 3 * pairs + 1;
    let segments = m * regions;

    let verts = tds_vertex_count(f);
    if verts > u32::MAX as u64 {
        return Err(format!("construction needs {} vertices, too many for 32-bit ids", verts));
    }
    // strictly below the vertex count, so this fits as well
    let budget = (4 * segments as u64 * pairs as u64 + 2) as u32;

    let mut b = InstanceBuilder::new();
    let blocks: Vec<Vec<TdsBlock>> = (0..pairs)
        .map(|i| (0..segments).map(|ell| add_block(&mut b, i, ell)).collect())
        .collect();
    for row in &blocks {
        for w in row.windows(2) {
            b.add_edge(w[0].p[3], w[1].p[0]);
        }
    }

    // one clause vertex per region, wired to the clique vertices of the
    // states whose pair assignments satisfy the clause
    let clause_verts: Vec<Vec<u32>> = (0..m)
        .map(|j| {
            (0..regions).map(|g| b.add_vertex(&format!("c{}_{}", j + 1, g + 1))).collect()
        })
        .collect();
    for (j, clause) in f.clauses.iter().enumerate() {
        for gamma in 0..regions {
            let ell = gamma * m + j;
            for (i, row) in blocks.iter().enumerate() {
                for first in [false, true] {
                    for second in [false, true] {
                        if pair_satisfies(clause, i, first, second) {
                            b.add_edge(clause_verts[j][gamma], row[ell].z[kappa(first, second)]);
                        }
                    }
                }
            }
        }
    }

    let h1 = b.add_vertex("h1");
    let h2 = b.add_vertex("h2");
    let h1p = b.add_vertex("h1p");
    let h2p = b.add_vertex("h2p");
    b.add_edge(h1, h1p);
    b.add_edge(h1, h2);
    b.add_edge(h1p, h2p);
    for row in &blocks {
        b.add_edge(h1, row[0].p[0]);
        b.add_edge(h1p, row[segments - 1].p[3]);
    }
    let graph = b.finish();
    assert_eq!(graph.n() as u64, verts, "vertex accounting");

    // sweep decomposition: the endpoint guards ride along in every bag, one
    // main bag per block holds the whole block, its clause vertex and the
    // frontier vertex of every other row, and between segments the frontier
    // slides forward one row at a time
    let ends = [h1, h2, h1p, h2p];
    let mut bags: Vec<Vec<u32>> = Vec::with_capacity(2 * segments * pairs);
    for ell in 0..segments {
        let (gamma, j) = (ell / m, ell % m);
        for i in 0..pairs {
            let mut bag = ends.to_vec();
            bag.push(clause_verts[j][gamma]);
            for (i2, row) in blocks.iter().enumerate() {
                if i2 < i {
                    bag.push(row[ell].p[3]);
                } else if i2 > i {
                    bag.push(row[ell].p[0]);
                }
            }
            bag.extend(blocks[i][ell].verts());
            bags.push(bag);
        }
        if ell + 1 < segments {
            for k in 0..pairs {
                let mut bag = ends.to_vec();
                for (i2, row) in blocks.iter().enumerate() {
                    if i2 < k {
                        bag.push(row[ell + 1].p[0]);
                    } else if i2 > k {
                        bag.push(row[ell].p[3]);
                    } else {
                        bag.push(row[ell].p[3]);
                        bag.push(row[ell + 1].p[0]);
                    }
                }
                bags.push(bag);
            }
        }
    }
    let decomposition = TreeDecomposition::path(bags);
    debug_assert!(crate::graph::verify_decomposition(&graph, &decomposition).is_ok());

    Ok(TdsInstance {
        graph,
        budget,
        decomposition,
        formula: f.clone(),
        pairs,
        regions,
        segments,
        blocks,
        clause_verts,
        guards: [h1, h2, h1p, h2p],
    })
}

fn first_undominated(g: &Graph, in_x: &[bool]) -> Option<u32> {
    g.vertices().find(|&v| !g.neighbors(v).iter().any(|&w| in_x[w as usize]))
}

/// Reads a total dominating set of size exactly the budget off a
/// satisfying assignment: per block the state pair of the row's
/// assignment, its clique vertex and y1, plus the guards h1 and h1'. The
/// result is checked vertex by vertex against open neighborhoods.
pub fn forward_tds_solution(inst: &TdsInstance, tau: &[bool]) -> Result<Vec<u32>, String> {
    let f = &inst.formula;
    if tau.len() != f.num_vars as usize {
        return Err(format!("assignment has {} values for {} variables", tau.len(), f.num_vars));
    }
    if !f.is_satisfied_by(tau) {
        return Err("assignment does not satisfy the formula".into());
    }
    let mut padded = tau.to_vec();
    padded.resize(2 * inst.pairs, false);

    let mut in_x = vec![false; inst.graph.n()];
    in_x[inst.guards[0] as usize] = true;
    in_x[inst.guards[2] as usize] = true;
    for (i, row) in inst.blocks.iter().enumerate() {
        let s = kappa(padded[2 * i], padded[2 * i + 1]);
        for blk in row {
            for &pos in &STATES[s] {
                in_x[blk.p[pos] as usize] = true;
            }
            in_x[blk.z[s] as usize] = true;
            in_x[blk.y[0] as usize] = true;
        }
    }
    if let Some(v) = first_undominated(&inst.graph, &in_x) {
        return Err(format!("vertex {} has no neighbor in the set", v));
    }
    let x: Vec<u32> = inst.graph.vertices().filter(|&v| in_x[v as usize]).collect();
    if x.len() != inst.budget as usize {
        return Err(format!("set has {} vertices, budget is {}", x.len(), inst.budget));
    }
    Ok(x)
}
