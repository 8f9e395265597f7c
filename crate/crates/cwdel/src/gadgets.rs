//! Reusable building blocks for the hardness constructions: deletion edges,
//! thin and thick arrows, color-set gadgets and decoding gadgets.
//!
//! Each gadget op mutates an InstanceBuilder in place, because heads and
//! tails must land on caller-owned vertices. The returned handle lists the
//! attachment vertices, the freshly created internal vertices, and packing
//! entries. A packing entry claims a minimum number of deletions for a
//! vertex set; claimed sets of distinct gadget instances stay disjoint as
//! long as no vertex serves as head of more than one gadget. Note that the
//! claimed set of an arrow or color-set gadget contains its head vertex in
//! addition to internals.

use crate::graph::Graph;
use crate::reductions::PackingEntry;

/// Growable graph with tagged vertices, used to assemble reduction
/// instances. Finishing hands over the immutable graph.
#[derive(Clone, Debug, Default)]
pub struct InstanceBuilder {
    g: Graph,
}

impl InstanceBuilder {
    pub fn new() -> Self {
        InstanceBuilder { g: Graph::new(0) }
    }

    pub fn add_vertex(&mut self, tag: &str) -> u32 {
        let v = self.g.add_vertex();
        if !tag.is_empty() {
            self.g.set_tag(v, tag);
        }
        v
    }

    pub fn add_edge(&mut self, u: u32, v: u32) {
        self.g.add_edge(u, v);
    }

    /// All edges between xs and ys. The sides must not overlap.
    pub fn join(&mut self, xs: &[u32], ys: &[u32]) {
        debug_assert!(xs.iter().all(|x| !ys.contains(x)), "join sides overlap");
        for &x in xs {
            for &y in ys {
                self.g.add_edge(x, y);
            }
        }
    }

    pub fn add_clique(&mut self, vs: &[u32]) {
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                self.g.add_edge(vs[i], vs[j]);
            }
        }
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.g.has_edge(u, v)
    }

    /// True if vs is a clique of pairwise true twins. Comparing consecutive
    /// pairs suffices since equality of closed neighborhoods is transitive.
    pub fn is_true_twin_class(&self, vs: &[u32]) -> bool {
        vs.windows(2)
            .all(|w| self.g.has_edge(w[0], w[1]) && self.g.are_twins(w[0], w[1]))
    }

    pub fn finish(self) -> Graph {
        self.g
    }
}

/// What a gadget op did to the builder: which existing vertices it attached
/// to, which vertices it created, and which deletion lower bounds it
/// contributes to the packing.
#[derive(Clone, Debug)]
pub struct GadgetHandle {
    pub kind: GadgetKind,
    /// Pre-existing vertices the gadget touched.
    pub attachments: Vec<u32>,
    /// Freshly created vertices, ascending.
    pub internals: Vec<u32>,
    /// The head vertex a deletion gets propagated to, if the kind has one.
    pub head: Option<u32>,
    pub packing: Vec<PackingEntry>,
}

#[derive(Clone, Debug)]
pub enum GadgetKind {
    /// Clique on the two endpoints and the fresh filler vertices.
    DeletionEdge { clique: Vec<u32> },
    /// Midpoint w between two deletion edges; the head-side clique is the
    /// one charged by the packing.
    ThinArrow {
        w: u32,
        tail_clique: Vec<u32>,
        head_clique: Vec<u32>,
    },
    ThickArrow {
        ell: u8,
        /// Clique joined to the twinclass, the other clique and the head.
        k_ell: Vec<u32>,
        /// Clique joined to k_ell and the head.
        k_rest: Vec<u32>,
        /// Independent vertices tied to k_ell by deletion edges.
        indep: Vec<u32>,
        del_cliques: Vec<Vec<u32>>,
    },
    ColorSet {
        /// Colors outside the allowed set, ascending.
        cbar: Vec<u8>,
        /// w_1, w_3, ...: joined to the twinclass, pinned to one cbar color.
        odd: Vec<u32>,
        /// w_2, w_4, ...: joined to w_last, pinned to color 1.
        even: Vec<u32>,
        /// Also pinned to color 1; shares a deletion edge with the head.
        w_last: u32,
        /// The pair deletion edges first, the head-side one last.
        del_cliques: Vec<Vec<u32>>,
    },
    Decoding {
        yhat: u32,
        k_r: Vec<u32>,
        indep: Vec<u32>,
    },
}

fn piece_with_head(internals: &[u32], head: u32) -> Vec<u32> {
    let mut verts = internals.to_vec();
    verts.push(head);
    verts.sort_unstable();
    verts
}

/// Adds r-1 fresh vertices completing {u, v} to a clique of size r+1. The
/// fresh vertices get no further edges, so exactly one deletion inside is
/// ever needed and it can be moved onto u or v without loss.
pub fn add_deletion_edge(b: &mut InstanceBuilder, u: u32, v: u32, r: u8) -> GadgetHandle {
    assert!(u != v, "deletion edge endpoints must differ");
    assert!(r >= 1, "need r >= 1");
    let mut clique = vec![u, v];
    let mut internals = Vec::with_capacity(r as usize - 1);
    for _ in 1..r {
        let w = b.add_vertex("dw");
        internals.push(w);
        clique.push(w);
    }
    b.add_clique(&clique);
    GadgetHandle {
        kind: GadgetKind::DeletionEdge { clique },
        attachments: vec![u, v],
        internals,
        head: None,
        packing: Vec::new(),
    }
}

/// Fresh midpoint w with deletion edges u-w and w-v. When u survives, the
/// cheapest local solution deletes w (passive); when u is gone, the first
/// deletion edge is already resolved and the head v can be deleted instead
/// (active). The packing charges one deletion to the head-side clique.
pub fn add_thin_arrow(b: &mut InstanceBuilder, u: u32, v: u32, r: u8) -> GadgetHandle {
    assert!(u != v, "thin arrow endpoints must differ");
    let w = b.add_vertex("aw");
    let tail = add_deletion_edge(b, u, w, r);
    let head = add_deletion_edge(b, w, v, r);
    let GadgetKind::DeletionEdge { clique: tail_clique } = tail.kind else {
        unreachable!()
    };
    let GadgetKind::DeletionEdge { clique: head_clique } = head.kind else {
        unreachable!()
    };
    let mut internals = vec![w];
    internals.extend(tail.internals);
    internals.extend(head.internals);
    let mut piece = head_clique.clone();
    piece.sort_unstable();
    GadgetHandle {
        kind: GadgetKind::ThinArrow {
            w,
            tail_clique,
            head_clique,
        },
        attachments: vec![u, v],
        internals,
        head: Some(v),
        packing: vec![PackingEntry {
            claim: 1,
            verts: piece,
        }],
    }
}

/// Arrow that fires once at least ell vertices of the twinclass us are
/// deleted. Internally a clique K_ell sees the twinclass, a clique on the
/// remaining r-ell vertices, and the head v; those three parts form a
/// K_{r+1}. Each K_ell vertex shares a deletion edge with each of ell-1
/// independent vertices. Any solution deletes at least ell vertices outside
/// us, and one of them can be the head only if ell twins are gone: with d'
/// deletions in K_ell, ell-d' vertex-disjoint deletion edges survive, and
/// fewer than ell deleted twins force d' >= 1 through the clique on us and
/// K_ell. The packing charges ell to everything but us.
pub fn add_thick_arrow(
    b: &mut InstanceBuilder,
    us: &[u32],
    v: u32,
    ell: u8,
    r: u8,
) -> Result<GadgetHandle, String> {
    assert!(ell >= 1 && ell <= r, "need 1 <= ell <= r");
    if us.len() != r as usize {
        return Err(format!(
            "twinclass has {} vertices, expected r = {}",
            us.len(),
            r
        ));
    }
    if us.contains(&v) {
        return Err("head vertex lies inside the twinclass".into());
    }
    if !b.is_true_twin_class(us) {
        return Err("attachment vertices are not a class of true twins".into());
    }
    // twins have equal neighborhoods, so checking one representative is enough
    if b.has_edge(us[0], v) {
        return Err("head vertex is adjacent to the twinclass".into());
    }

    let k_ell: Vec<u32> = (0..ell).map(|_| b.add_vertex("tk")).collect();
    let k_rest: Vec<u32> = (ell..r).map(|_| b.add_vertex("tr")).collect();
    let indep: Vec<u32> = (1..ell).map(|_| b.add_vertex("ti")).collect();
    b.add_clique(&k_ell);
    b.add_clique(&k_rest);
    b.join(&k_ell, &k_rest);
    b.join(&k_ell, &[v]);
    b.join(&k_rest, &[v]);
    b.join(us, &k_ell);

    let mut internals: Vec<u32> = k_ell.iter().chain(&k_rest).chain(&indep).copied().collect();
    let mut del_cliques = Vec::new();
    for &x in &k_ell {
        for &z in &indep {
            let de = add_deletion_edge(b, x, z, r);
            internals.extend(&de.internals);
            let GadgetKind::DeletionEdge { clique } = de.kind else {
                unreachable!()
            };
            del_cliques.push(clique);
        }
    }
    debug_assert!(internals.len() <= (r as usize).pow(3) + 3 * r as usize + 1);

    let piece = piece_with_head(&internals, v);
    let mut attachments = us.to_vec();
    attachments.push(v);
    Ok(GadgetHandle {
        kind: GadgetKind::ThickArrow {
            ell,
            k_ell,
            k_rest,
            indep,
            del_cliques,
        },
        attachments,
        internals,
        head: Some(v),
        packing: vec![PackingEntry {
            claim: ell as u32,
            verts: piece,
        }],
    })
}

/// Gadget that lets the head v be deleted cheaply exactly when the colors
/// kept on the twinclass us all lie in the allowed set (c_mask, bit c-1 for
/// color c). The central clique f pins the internal states: w_{2i-1} may
/// only take the i-th color missing from the allowed set, w_{2i} and the
/// last w only color 1. Writing ell for the number of missing colors, the
/// gadget has ell+1 vertex-disjoint deletion edges and the packing charges
/// ell+1 to everything but us.
pub fn add_color_set_gadget(
    b: &mut InstanceBuilder,
    us: &[u32],
    v: u32,
    c_mask: u32,
    f: &[u32],
    r: u8,
) -> Result<GadgetHandle, String> {
    assert!(r >= 1, "need r >= 1");
    let fullmask = (1u32 << r) - 1;
    if c_mask & !fullmask != 0 {
        return Err("allowed color set mentions colors beyond r".into());
    }
    if c_mask == fullmask {
        return Err("allowed color set must miss at least one color".into());
    }
    if us.is_empty() || us.len() > r as usize {
        return Err(format!(
            "twinclass has {} vertices, expected between 1 and r = {}",
            us.len(),
            r
        ));
    }
    if (c_mask.count_ones() as usize) > us.len() {
        return Err(format!(
            "allowed color set has {} colors but the twinclass only {} vertices",
            c_mask.count_ones(),
            us.len()
        ));
    }
    if f.len() != r as usize {
        return Err(format!(
            "central clique has {} vertices, expected r = {}",
            f.len(),
            r
        ));
    }
    if us.contains(&v) {
        return Err("head vertex lies inside the twinclass".into());
    }
    if f.contains(&v) || f.iter().any(|x| us.contains(x)) {
        return Err("central clique overlaps the twinclass or the head".into());
    }
    if !b.is_true_twin_class(us) {
        return Err("attachment vertices are not a class of true twins".into());
    }
    if b.has_edge(us[0], v) {
        return Err("head vertex is adjacent to the twinclass".into());
    }

    let ell = r - c_mask.count_ones() as u8;
    let cbar: Vec<u8> = (1..=r).filter(|c| c_mask & (1 << (c - 1)) == 0).collect();
    let ws: Vec<u32> = (0..2 * ell as usize + 1)
        .map(|i| b.add_vertex(&format!("cw{}", i + 1)))
        .collect();
    let odd: Vec<u32> = (0..ell as usize).map(|i| ws[2 * i]).collect();
    let even: Vec<u32> = (0..ell as usize).map(|i| ws[2 * i + 1]).collect();
    let w_last = ws[2 * ell as usize];

    b.join(us, &odd);
    b.join(&even, &[w_last]);
    // pin states via the central clique: everything on the even side loses
    // all colors but 1, and w_{2i-1} keeps only cbar[i]
    let mut even_side = even.clone();
    even_side.push(w_last);
    b.join(&even_side, &f[1..]);
    for (i, &wo) in odd.iter().enumerate() {
        let allowed = cbar[i];
        let side: Vec<u32> = f
            .iter()
            .enumerate()
            .filter(|&(s, _)| s + 1 != allowed as usize)
            .map(|(_, &fv)| fv)
            .collect();
        b.join(&[wo], &side);
    }

    let mut internals = ws;
    let mut del_cliques = Vec::new();
    for i in 0..ell as usize {
        let de = add_deletion_edge(b, odd[i], even[i], r);
        internals.extend(&de.internals);
        let GadgetKind::DeletionEdge { clique } = de.kind else {
            unreachable!()
        };
        del_cliques.push(clique);
    }
    let de = add_deletion_edge(b, w_last, v, r);
    internals.extend(&de.internals);
    let GadgetKind::DeletionEdge { clique } = de.kind else {
        unreachable!()
    };
    del_cliques.push(clique);

    let piece = piece_with_head(&internals, v);
    let mut attachments = us.to_vec();
    attachments.push(v);
    attachments.extend_from_slice(f);
    Ok(GadgetHandle {
        kind: GadgetKind::ColorSet {
            cbar,
            odd,
            even,
            w_last,
            del_cliques,
        },
        attachments,
        internals,
        head: Some(v),
        packing: vec![PackingEntry {
            claim: ell as u32 + 1,
            verts: piece,
        }],
    })
}

/// Complete (r+1)-partite gadget: a K_r joined to an independent set. The
/// first independent vertex is the distinguished y-hat; with the K_r it
/// forms the K_{r+1} the packing charges one deletion to. Deleting y-hat
/// alone cannot stay within that claim once the independent set has a
/// second vertex, since every survivor there still completes a K_{r+1}.
pub fn add_decoding_gadget(b: &mut InstanceBuilder, indep_size: usize, r: u8) -> GadgetHandle {
    assert!(indep_size >= 1, "need at least the distinguished vertex");
    let k_r: Vec<u32> = (0..r).map(|_| b.add_vertex("yk")).collect();
    b.add_clique(&k_r);
    let yhat = b.add_vertex("yhat");
    let mut indep = vec![yhat];
    for _ in 1..indep_size {
        indep.push(b.add_vertex("yi"));
    }
    b.join(&k_r, &indep);

    let mut piece = k_r.clone();
    piece.push(yhat);
    piece.sort_unstable();
    let mut internals = k_r.clone();
    internals.extend(&indep);
    GadgetHandle {
        kind: GadgetKind::Decoding { yhat, k_r, indep },
        attachments: Vec::new(),
        internals,
        head: None,
        packing: vec![PackingEntry {
            claim: 1,
            verts: piece,
        }],
    }
}

/// Per-vertex allowed-color masks when the central clique is colored
/// canonically, f_s getting color s (1-based): every neighbor of f_s loses
/// color s, and f_s itself keeps exactly its own color.
pub fn lists_under_central_coloring(g: &Graph, f: &[u32], r: u8) -> Vec<u32> {
    let fullmask = (1u32 << r) - 1;
    let mut lists = vec![fullmask; g.n()];
    for (s, &fv) in f.iter().enumerate() {
        let bit = 1u32 << s;
        for &x in g.neighbors(fv) {
            lists[x as usize] &= !bit;
        }
    }
    for (s, &fv) in f.iter().enumerate() {
        lists[fv as usize] = 1u32 << s;
    }
    lists
}
