//! Graph representation, twin classes, quotients, and decomposition checking.
//!
//! Vertices are dense ids 0..n-1. Adjacency lists are kept sorted and
//! deduplicated, no self loops. Each vertex can carry a tag string that
//! records where a generated vertex came from (gadget role etc).

use std::fmt;
use std::io::{BufRead, Write};

#[derive(Clone, Default)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    tags: Vec<String>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n(), self.m())
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], tags: vec![String::new(); n] }
    }

    pub fn with_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// Adds an undirected edge, keeping lists sorted. Ignores duplicates.
    pub fn add_edge(&mut self, u: u32, v: u32) {
        assert!(u != v, "self loop at {}", u);
        assert!((u as usize) < self.n() && (v as usize) < self.n(), "edge endpoint out of range");
        let insert = |list: &mut Vec<u32>, x: u32| {
            if let Err(pos) = list.binary_search(&x) {
                list.insert(pos, x);
            }
        };
        insert(&mut self.adj[u as usize], v);
        insert(&mut self.adj[v as usize], u);
    }

    /// Appends a fresh isolated vertex and returns its id.
    pub fn add_vertex(&mut self) -> u32 {
        self.adj.push(Vec::new());
        self.tags.push(String::new());
        (self.adj.len() - 1) as u32
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        0..self.n() as u32
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nb)| {
            nb.iter().filter(move |&&v| (u as u32) < v).map(move |&v| (u as u32, v))
        })
    }

    pub fn tag(&self, v: u32) -> &str {
        &self.tags[v as usize]
    }

    pub fn set_tag(&mut self, v: u32, tag: impl Into<String>) {
        self.tags[v as usize] = tag.into();
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in self.neighbors(u) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n()
    }

    /// Induced subgraph on `verts` (need not be sorted); returns the graph and
    /// the map from new ids to old ids (sorted ascending).
    pub fn induced(&self, verts: &[u32]) -> (Graph, Vec<u32>) {
        let mut keep: Vec<u32> = verts.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut g = Graph::new(keep.len());
        for (new_u, &u) in keep.iter().enumerate() {
            g.tags[new_u] = self.tags[u as usize].clone();
            for &v in self.neighbors(u) {
                if let Ok(new_v) = keep.binary_search(&v) {
                    if new_u < new_v {
                        g.add_edge(new_u as u32, new_v as u32);
                    }
                }
            }
        }
        (g, keep)
    }

    /// True twin test: N[u] = N[v]. False twin test: N(u) = N(v).
    pub fn are_twins(&self, u: u32, v: u32) -> bool {
        if u == v {
            return true;
        }
        // compare N(u)\{v} with N(v)\{u}
        let nu = self.neighbors(u).iter().filter(|&&x| x != v);
        let nv = self.neighbors(v).iter().filter(|&&x| x != u);
        nu.eq(nv)
    }
}

/// Partition of the vertex set into disjoint nonempty blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub blocks: Vec<Vec<u32>>,
}

impl Partition {
    pub fn singletons(n: usize) -> Self {
        Partition { blocks: (0..n as u32).map(|v| vec![v]).collect() }
    }

    /// Checks disjointness and exact coverage of 0..n-1.
    pub fn validate(&self, n: usize) -> Result<(), String> {
        let mut seen = vec![false; n];
        for b in &self.blocks {
            if b.is_empty() {
                return Err("empty block".into());
            }
            for &v in b {
                if v as usize >= n {
                    return Err(format!("vertex {} out of range", v));
                }
                if seen[v as usize] {
                    return Err(format!("vertex {} in two blocks", v));
                }
                seen[v as usize] = true;
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(format!("vertex {} not covered", v));
        }
        Ok(())
    }
}

/// Partition into maximal twin classes. Two vertices are twins when
/// N(u) \ {v} = N(v) \ {u}. Blocks come out sorted, ordered by smallest member.
pub fn twinclass_partition(g: &Graph) -> Partition {
    let n = g.n();
    let mut block_of: Vec<Option<usize>> = vec![None; n];
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    for u in 0..n as u32 {
        if block_of[u as usize].is_some() {
            continue;
        }
        let id = blocks.len();
        block_of[u as usize] = Some(id);
        let mut blk = vec![u];
        for v in u + 1..n as u32 {
            if block_of[v as usize].is_none() && g.are_twins(u, v) {
                block_of[v as usize] = Some(id);
                blk.push(v);
            }
        }
        blocks.push(blk);
    }
    Partition { blocks }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwinClassKind {
    Singleton,
    TrueTwins,
    FalseTwins,
}

/// Classifies a twinclass block. Errors when the block is not actually a
/// set of pairwise twins of one kind.
pub fn classify_twinclass(g: &Graph, block: &[u32]) -> Result<TwinClassKind, String> {
    if block.is_empty() {
        return Err("empty block".into());
    }
    if block.len() == 1 {
        return Ok(TwinClassKind::Singleton);
    }
    let adjacent = g.has_edge(block[0], block[1]);
    for i in 0..block.len() {
        for j in i + 1..block.len() {
            if !g.are_twins(block[i], block[j]) {
                return Err(format!("{} and {} are not twins", block[i], block[j]));
            }
            if g.has_edge(block[i], block[j]) != adjacent {
                return Err("mixed adjacency inside block".into());
            }
        }
    }
    Ok(if adjacent { TwinClassKind::TrueTwins } else { TwinClassKind::FalseTwins })
}

/// Quotient graph: one vertex per block, blocks adjacent iff any cross edge.
pub fn quotient(g: &Graph, p: &Partition) -> Result<Graph, String> {
    p.validate(g.n())?;
    let mut block_of = vec![0usize; g.n()];
    for (i, b) in p.blocks.iter().enumerate() {
        for &v in b {
            block_of[v as usize] = i;
        }
    }
    let mut q = Graph::new(p.blocks.len());
    for (u, v) in g.edges() {
        let (bu, bv) = (block_of[u as usize], block_of[v as usize]);
        if bu != bv {
            q.add_edge(bu as u32, bv as u32);
        }
    }
    Ok(q)
}

/// Tree decomposition; a path decomposition is the special case where the
/// skeleton is a path. Bags hold vertex ids of the decomposed graph.
#[derive(Clone, Debug)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<u32>>,
    /// skeleton edges between bag indices
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Path-shaped decomposition from a bag sequence.
    pub fn path(bags: Vec<Vec<u32>>) -> Self {
        let edges = (1..bags.len()).map(|i| (i - 1, i)).collect();
        TreeDecomposition { bags, edges }
    }

    pub fn width(&self) -> u32 {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1) as u32
    }

    pub fn is_path(&self) -> bool {
        let n = self.bags.len();
        if n <= 1 {
            return true;
        }
        if self.edges.len() != n - 1 {
            return false;
        }
        let mut deg = vec![0usize; n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg.iter().all(|&d| d <= 2) && deg.iter().filter(|&&d| d == 1).count() == 2
    }

    /// All vertices occurring in some bag, sorted and deduplicated.
    pub fn covered_vertices(&self) -> Vec<u32> {
        let mut vs: Vec<u32> = self.bags.iter().flatten().copied().collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DecompositionError {
    #[error("vertex {0} is in no bag")]
    UncoveredVertex(u32),
    #[error("edge {{{0},{1}}} is contained in no bag")]
    UncoveredEdge(u32, u32),
    #[error("bags containing vertex {0} are disconnected in the skeleton")]
    DisconnectedOccurrence(u32),
    #[error("skeleton is not a tree: {0}")]
    BrokenSkeleton(String),
}

/// Checks the three decomposition axioms against the whole graph and returns
/// the width.
pub fn verify_decomposition(g: &Graph, d: &TreeDecomposition) -> Result<u32, DecompositionError> {
    let all: Vec<u32> = g.vertices().collect();
    verify_decomposition_on(g, d, &all)
}

/// Same, but the decomposition is required to cover exactly `verts` and all
/// edges of the induced subgraph on `verts`. Used for per-component witnesses
/// whose bags hold global vertex ids.
pub fn verify_decomposition_on(
    g: &Graph,
    d: &TreeDecomposition,
    verts: &[u32],
) -> Result<u32, DecompositionError> {
    let nb = d.bags.len();
    if nb == 0 {
        if verts.is_empty() {
            return Ok(0);
        }
        return Err(DecompositionError::UncoveredVertex(verts[0]));
    }
    for &(a, b) in &d.edges {
        if a >= nb || b >= nb || a == b {
            return Err(DecompositionError::BrokenSkeleton(format!("bad edge ({},{})", a, b)));
        }
    }
    // tree check: connected with nb-1 edges
    if d.edges.len() != nb - 1 {
        return Err(DecompositionError::BrokenSkeleton(format!(
            "{} nodes but {} edges",
            nb,
            d.edges.len()
        )));
    }
    let mut skel = vec![Vec::new(); nb];
    for &(a, b) in &d.edges {
        skel[a].push(b);
        skel[b].push(a);
    }
    {
        let mut seen = vec![false; nb];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &skel[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(DecompositionError::BrokenSkeleton("skeleton disconnected".into()));
        }
    }

    let mut vset: Vec<u32> = verts.to_vec();
    vset.sort_unstable();
    vset.dedup();

    // bag indices per vertex, ascending by construction
    let mut occ: Vec<Vec<usize>> = vec![Vec::new(); vset.len()];
    for (bi, bag) in d.bags.iter().enumerate() {
        let mut s = bag.clone();
        s.sort_unstable();
        s.dedup();
        for &v in &s {
            match vset.binary_search(&v) {
                Ok(pos) => occ[pos].push(bi),
                // bag mentions a vertex outside the claimed cover
                Err(_) => return Err(DecompositionError::UncoveredVertex(v)),
            }
        }
    }
    if let Some(pos) = occ.iter().position(|o| o.is_empty()) {
        return Err(DecompositionError::UncoveredVertex(vset[pos]));
    }

    // every induced edge inside some bag: the occurrence lists must intersect
    let share_bag = |a: &[usize], b: &[usize]| -> bool {
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Equal => return true,
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
            }
        }
        false
    };
    for (pos, &u) in vset.iter().enumerate() {
        for &v in g.neighbors(u) {
            if v <= u {
                continue;
            }
            let Ok(pos_v) = vset.binary_search(&v) else { continue };
            if !share_bag(&occ[pos], &occ[pos_v]) {
                return Err(DecompositionError::UncoveredEdge(u, v));
            }
        }
    }

    // occurrence connectivity: BFS over the skeleton restricted to each
    // vertex's bags, reusing a stamp array across vertices
    let mut stamp = vec![0u32; nb];
    let mut round = 0u32;
    for (pos, &v) in vset.iter().enumerate() {
        let list = &occ[pos];
        if list.len() <= 1 {
            continue;
        }
        round += 1;
        let mut stack = vec![list[0]];
        stamp[list[0]] = round;
        let mut reached = 1;
        while let Some(x) = stack.pop() {
            for &y in &skel[x] {
                if stamp[y] != round && list.binary_search(&y).is_ok() {
                    stamp[y] = round;
                    reached += 1;
                    stack.push(y);
                }
            }
        }
        if reached != list.len() {
            return Err(DecompositionError::DisconnectedOccurrence(v));
        }
    }

    Ok(d.bags.iter().map(|b| b.len()).max().unwrap().saturating_sub(1) as u32)
}

pub const TREEWIDTH_CAP: usize = 18;

/// Exact treewidth by the subset DP over elimination orders. Only meant as a
/// spot-check oracle, hence the hard size cap.
pub fn exact_treewidth(g: &Graph) -> Result<u32, String> {
    let n = g.n();
    if n > TREEWIDTH_CAP {
        return Err(format!("exact_treewidth: {} vertices exceeds cap {}", n, TREEWIDTH_CAP));
    }
    if n == 0 {
        return Ok(0);
    }
    // q(s, v) = number of vertices outside s+{v} reachable from v through s
    let reach_count = |s: u32, v: usize| -> u32 {
        let mut seen_in: u32 = 1 << v; // visited vertices of s (and v)
        let mut hit: u32 = 0; // reached vertices outside
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            for &w in g.neighbors(x as u32) {
                let wb = 1u32 << w;
                if s & wb != 0 {
                    if seen_in & wb == 0 {
                        seen_in |= wb;
                        stack.push(w as usize);
                    }
                } else if w as usize != v {
                    hit |= wb;
                }
            }
        }
        hit.count_ones()
    };
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut tw = vec![u32::MAX; (full as usize) + 1];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = u32::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = s & !(1u32 << v);
            let q = reach_count(prev, v);
            let cand = tw[prev as usize].max(q);
            if cand < best {
                best = cand;
            }
        }
        tw[s as usize] = best;
    }
    Ok(tw[full as usize])
}

/// Writes the edge-list format: `p edge <n> <m>` then `e <u> <v>`, 1-indexed.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "p edge {} {}", g.n(), g.m())?;
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1)?;
    }
    Ok(())
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph, String> {
    let mut g: Option<Graph> = None;
    let mut expect_m = 0usize;
    for (lineno, line) in input.lines().enumerate() {
        let line = line.map_err(|e| e.to_string())?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut it = line.split_whitespace();
        match it.next() {
            Some("p") => {
                if g.is_some() {
                    return Err(format!("line {}: duplicate header", lineno + 1));
                }
                if it.next() != Some("edge") {
                    return Err(format!("line {}: expected 'p edge'", lineno + 1));
                }
                let n: usize = it
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or(format!("line {}: bad vertex count", lineno + 1))?;
                expect_m = it
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or(format!("line {}: bad edge count", lineno + 1))?;
                g = Some(Graph::new(n));
            }
            Some("e") => {
                let g = g.as_mut().ok_or(format!("line {}: edge before header", lineno + 1))?;
                let u: u32 = it
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or(format!("line {}: bad endpoint", lineno + 1))?;
                let v: u32 = it
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or(format!("line {}: bad endpoint", lineno + 1))?;
                if u == 0 || v == 0 || u as usize > g.n() || v as usize > g.n() {
                    return Err(format!("line {}: endpoint out of range", lineno + 1));
                }
                g.add_edge(u - 1, v - 1);
            }
            Some(other) => return Err(format!("line {}: unknown record '{}'", lineno + 1, other)),
            None => {}
        }
    }
    let g = g.ok_or("missing 'p edge' header")?;
    if g.m() != expect_m {
        return Err(format!("header claims {} edges, file has {}", expect_m, g.m()));
    }
    Ok(g)
}

/// Sidecar tag file: one `<vertex-id> <tag>` per line, 1-indexed ids,
/// untagged vertices omitted.
pub fn write_tags<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    for v in g.vertices() {
        if !g.tag(v).is_empty() {
            writeln!(out, "{} {}", v + 1, g.tag(v))?;
        }
    }
    Ok(())
}

pub fn read_tags<R: BufRead>(g: &mut Graph, input: R) -> Result<(), String> {
    for (lineno, line) in input.lines().enumerate() {
        let line = line.map_err(|e| e.to_string())?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (id, tag) = line.split_once(char::is_whitespace).ok_or(format!(
            "line {}: expected '<vertex-id> <tag>'",
            lineno + 1
        ))?;
        let id: u32 =
            id.parse().map_err(|_| format!("line {}: bad vertex id", lineno + 1))?;
        if id == 0 || id as usize > g.n() {
            return Err(format!("line {}: vertex id out of range", lineno + 1));
        }
        g.set_tag(id - 1, tag.trim());
    }
    Ok(())
}
