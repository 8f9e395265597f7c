//! SAT to deletion-to-r-colorable. Central twinclasses encode one group of
//! variables each, forcing structures pin how many central vertices a group
//! may delete, decoders recognize which coloring a group picked, and one
//! critical graph per clause collects thin arrows from the decoders whose
//! member satisfies it. The dense setting uses twinclasses of size r and
//! thick arrows; the sparse setting uses singletons and thin arrows.

use num_bigint::BigUint;

use super::phi::{self, PhiMember};
use super::{
    choose_p_dense, choose_p_sparse, dense_level_counts, CnfFormula, KappaTable, PackingEntry,
    ReductionInstance, ReductionKind, ReductionParams, Setting,
};
use crate::critical::pick_critical;
use crate::gadgets::{
    add_color_set_gadget, add_decoding_gadget, add_thick_arrow, add_thin_arrow, GadgetHandle,
    GadgetKind, InstanceBuilder,
};
use crate::graph::{Graph, TreeDecomposition};
use crate::oracle::Solution;

/// Refuse to build instances beyond this many vertices unless the caller
/// raises the cap.
pub const DEFAULT_MAX_VERTICES: usize = 5_000_000;

/// Everything forward_solution needs to replay a construction.
#[derive(Clone, Debug)]
pub struct DtcLayout {
    pub setting: Setting,
    pub formula: CnfFormula,
    /// group -> class -> vertex ids; singleton classes in the sparse setting
    pub groups: Vec<Vec<Vec<u32>>>,
    /// canonical member order, shared by every group
    pub members: Vec<PhiMember>,
    pub structure: Vec<StructureGadget>,
    pub decoders: Vec<DecoderGadget>,
    pub clauses: Vec<ClauseGadget>,
}

/// One copy of a forcing structure: a critical graph L with an arrow into a
/// private L vertex for every class of the chosen set.
#[derive(Clone, Debug)]
pub struct StructureGadget {
    pub group: usize,
    /// class deletions needed to fire an arrow; always 1 in the sparse setting
    pub ell: u8,
    /// class indices within the group, aligned with arrows
    pub classes: Vec<usize>,
    pub arrows: Vec<GadgetHandle>,
    pub l_verts: Vec<u32>,
}

/// Decoder for one (clause, group, member) triple. The distinguished vertex
/// of y becomes cheap to delete exactly when the group keeps the member's
/// colors, witnessed by one color-set gadget per constrained class.
#[derive(Clone, Debug)]
pub struct DecoderGadget {
    pub clause: usize,
    pub group: usize,
    pub member: usize,
    pub y: GadgetHandle,
    /// (class index, gadget), ascending by class
    pub ws: Vec<(usize, GadgetHandle)>,
}

/// Clause checker: a critical graph Z fed by a thin arrow from the decoder
/// of every (group, member) pair whose assignment satisfies the clause.
#[derive(Clone, Debug)]
pub struct ClauseGadget {
    pub z_verts: Vec<u32>,
    /// (group, member, arrow)
    pub arrows: Vec<(usize, usize, GadgetHandle)>,
}

/// Member list and group decoder table for one group of p0 variables. Fails
/// when the family is too small to address 2^p0 members.
pub fn build_phi_kappa(
    setting: Setting,
    params: &ReductionParams,
) -> Result<(Vec<PhiMember>, KappaTable), String> {
    let size = match setting {
        Setting::Dense => phi::dense_phi_size(params.r, params.p),
        Setting::Sparse => phi::sparse_phi_size(params.r, params.p),
    };
    phi::ensure_encodable(&size, params.p0)?;
    let members = match setting {
        Setting::Dense => phi::enumerate_dense_members(params.r, params.p),
        Setting::Sparse => phi::enumerate_sparse_members(params.r, params.p),
    };
    debug_assert_eq!(BigUint::from(members.len()), size);
    Ok((members, KappaTable::identity(params.p0)))
}

pub fn build_dense_reduction(
    f: &CnfFormula,
    r: u8,
    p0: u32,
    max_vertices: usize,
) -> Result<ReductionInstance, String> {
    build_dtc(f, r, p0, Setting::Dense, max_vertices)
}

pub fn build_sparse_reduction(
    f: &CnfFormula,
    r: u8,
    p0: u32,
    max_vertices: usize,
) -> Result<ReductionInstance, String> {
    build_dtc(f, r, p0, Setting::Sparse, max_vertices)
}

// Vertex counts of the building blocks, shared by the size prediction and
// the builder so the prediction is exact.

fn thin_arrow_verts(r: u8) -> u64 {
    2 * r as u64 - 1
}

fn thick_arrow_verts(r: u8, ell: u8) -> u64 {
    let (r, ell) = (r as u64, ell as u64);
    r + ell - 1 + ell * (ell - 1) * (r - 1)
}

/// Color-set gadget for an allowed set with the given number of colors.
fn color_set_verts(r: u8, allowed: u32) -> u64 {
    let ell = r as u64 - allowed as u64;
    2 * ell + 1 + (ell + 1) * (r as u64 - 1)
}

fn critical_verts(r: u8, min_size: u64) -> u64 {
    let gamma = if min_size <= 1 {
        1
    } else {
        (min_size - 1).div_ceil(r as u64)
    };
    r as u64 * gamma + 1
}

/// Variable range [lo, hi) of group i.
fn group_span(num_vars: u32, p0: u32, i: u32) -> (u32, u32) {
    let lo = i * p0;
    (lo, num_vars.min(lo + p0))
}

/// Group-local assignment indices that satisfy the clause through one of the
/// group's own variables. Bit k of an index holds the value of variable
/// lo + k.
fn satisfying_indices(clause: &[i32], lo: u32, hi: u32) -> Vec<u32> {
    (0..1u32 << (hi - lo))
        .filter(|&a| {
            clause.iter().any(|&lit| {
                let v = lit.unsigned_abs() - 1;
                v >= lo && v < hi && ((a >> (v - lo)) & 1 == 1) == (lit > 0)
            })
        })
        .collect()
}

/// k-subsets of 0..p in lexicographic order, k >= 1.
fn k_subsets(p: usize, k: usize) -> Vec<Vec<usize>> {
    assert!(k >= 1 && k <= p, "need 1 <= k <= p");
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == p - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Instance dimensions derived from (formula, r, p0, setting) before any
/// vertex exists.
struct Plan {
    t: u32,
    p: u32,
    /// classes with l deletions per group member, index l = 0..=class size
    level_counts: Vec<u32>,
    /// forcing structure rows (arrow threshold ell, set size)
    set_sizes: Vec<(u8, u32)>,
    /// structure copies per (group, row, set)
    copies: u64,
    /// central vertices each group deletes, the same for every member
    group_deletions: u64,
    /// decoder independent set size, distinguished vertex included
    y_indep: usize,
    phi_size: BigUint,
}

fn make_plan(f: &CnfFormula, r: u8, p0: u32, setting: Setting) -> Plan {
    let (p, lc, phi_size) = match setting {
        Setting::Dense => {
            let p = choose_p_dense(p0, r);
            (p, dense_level_counts(r, p), phi::dense_phi_size(r, p))
        }
        Setting::Sparse => {
            let p = choose_p_sparse(p0, r);
            (p, phi::sparse_level_counts(r, p), phi::sparse_phi_size(r, p))
        }
    };
    let t = f.num_vars.div_ceil(p0);
    // a set must outnumber the classes that delete fewer than ell vertices,
    // so some member of it always fires its arrow
    let max_ell = (lc.len() - 1) as u8;
    let set_sizes: Vec<(u8, u32)> = (1..=max_ell)
        .map(|ell| (ell, lc[..ell as usize].iter().sum::<u32>() + 1))
        .collect();
    let group_deletions: u64 = lc
        .iter()
        .enumerate()
        .map(|(l, &c)| l as u64 * c as u64)
        .sum();
    let copies = 1 + t as u64 * group_deletions;
    let y_indep = match setting {
        // one color-set gadget per class the member constrains
        Setting::Dense => (p - lc[0]) as usize + 1,
        // one per class, the kept ones included
        Setting::Sparse => p as usize + 1,
    };
    Plan {
        t,
        p,
        level_counts: lc,
        set_sizes,
        copies,
        group_deletions,
        y_indep,
        phi_size,
    }
}

fn predicted_vertices(f: &CnfFormula, r: u8, p0: u32, setting: Setting, plan: &Plan) -> BigUint {
    let class_size: u64 = match setting {
        Setting::Dense => r as u64,
        Setting::Sparse => 1,
    };
    let mut total = BigUint::from(plan.t as u64 * plan.p as u64 * class_size + r as u64);
    for &(ell, s) in &plan.set_sizes {
        let arrow = match setting {
            Setting::Dense => thick_arrow_verts(r, ell),
            Setting::Sparse => thin_arrow_verts(r),
        };
        let per_copy = critical_verts(r, s as u64) + s as u64 * arrow;
        total += BigUint::from(plan.t) * phi::binom(plan.p, s) * BigUint::from(plan.copies * per_copy);
    }
    let w_total: u64 = match setting {
        Setting::Dense => plan.level_counts[1..]
            .iter()
            .enumerate()
            .map(|(i, &c)| c as u64 * color_set_verts(r, r as u32 - (i as u32 + 1)))
            .sum(),
        Setting::Sparse => {
            let deleted = plan.level_counts[1] as u64;
            (plan.p as u64 - deleted) * color_set_verts(r, 1) + deleted * color_set_verts(r, 0)
        }
    };
    let y = r as u64 + plan.y_indep as u64;
    total += BigUint::from(f.clauses.len() as u64 * plan.t as u64)
        * &plan.phi_size
        * BigUint::from(y + w_total);
    let zmin = (f.q() as u64) << p0;
    for clause in &f.clauses {
        let mut arrows = 0u64;
        for i in 0..plan.t {
            let (lo, hi) = group_span(f.num_vars, p0, i);
            arrows += satisfying_indices(clause, lo, hi).len() as u64;
        }
        total += BigUint::from(critical_verts(r, zmin) + arrows * thin_arrow_verts(r));
    }
    total
}

/// Copies a finished graph into the builder, preserving tags, and returns
/// the id offset.
pub(crate) fn embed(b: &mut InstanceBuilder, g: &Graph) -> u32 {
    let off = b.n() as u32;
    for v in g.vertices() {
        b.add_vertex(g.tag(v));
    }
    for (u, v) in g.edges() {
        b.add_edge(off + u, off + v);
    }
    off
}

fn translate_bags(d: &TreeDecomposition, off: u32) -> Vec<Vec<u32>> {
    d.bags
        .iter()
        .map(|bag| bag.iter().map(|&v| v + off).collect())
        .collect()
}

fn bag_containing(bags: &[Vec<u32>], v: u32) -> usize {
    bags.iter()
        .position(|b| b.contains(&v))
        .expect("vertex appears in no bag")
}

/// Hangs the thick arrow's bags off the anchor: one bag for the K_{r+1} on
/// the cliques and the head, one per independent vertex, one per deletion
/// edge. The twinclass stays out, witnesses never mention the modulator.
fn attach_thick(
    bags: &mut Vec<Vec<u32>>,
    edges: &mut Vec<(usize, usize)>,
    h: &GadgetHandle,
    anchor: usize,
) {
    let GadgetKind::ThickArrow {
        k_ell,
        k_rest,
        indep,
        del_cliques,
        ..
    } = &h.kind
    else {
        unreachable!()
    };
    let b0 = bags.len();
    let mut bag0: Vec<u32> = k_ell.iter().chain(k_rest).copied().collect();
    bag0.push(h.head.unwrap());
    bags.push(bag0);
    edges.push((anchor, b0));
    for &z in indep {
        let bz = bags.len();
        let mut bag = k_ell.clone();
        bag.push(z);
        bags.push(bag);
        edges.push((b0, bz));
        for dc in del_cliques.iter().filter(|dc| dc.contains(&z)) {
            let bd = bags.len();
            bags.push(dc.clone());
            edges.push((bz, bd));
        }
    }
}

/// Hangs the two deletion-edge bags of a thin arrow off the anchor and
/// returns the tail-side bag index. drop_tail removes a modulator tail from
/// its bag.
fn attach_thin(
    bags: &mut Vec<Vec<u32>>,
    edges: &mut Vec<(usize, usize)>,
    h: &GadgetHandle,
    anchor: usize,
    drop_tail: Option<u32>,
) -> usize {
    let GadgetKind::ThinArrow {
        tail_clique,
        head_clique,
        ..
    } = &h.kind
    else {
        unreachable!()
    };
    let hb = bags.len();
    bags.push(head_clique.clone());
    edges.push((anchor, hb));
    let tb = bags.len();
    let bag: Vec<u32> = match drop_tail {
        Some(u) => tail_clique.iter().copied().filter(|&x| x != u).collect(),
        None => tail_clique.clone(),
    };
    bags.push(bag);
    edges.push((hb, tb));
    tb
}

/// Color-set subtree: the head-side deletion edge sits next to the decoder
/// bag holding the head, each pair hangs below it through a {w_last, even}
/// bag.
fn attach_color_set(
    bags: &mut Vec<Vec<u32>>,
    edges: &mut Vec<(usize, usize)>,
    h: &GadgetHandle,
    anchor: usize,
) {
    let GadgetKind::ColorSet {
        even,
        w_last,
        del_cliques,
        ..
    } = &h.kind
    else {
        unreachable!()
    };
    let hb = bags.len();
    bags.push(del_cliques.last().unwrap().clone());
    edges.push((anchor, hb));
    for (i, &e) in even.iter().enumerate() {
        let eb = bags.len();
        bags.push(vec![*w_last, e]);
        edges.push((hb, eb));
        let pb = bags.len();
        bags.push(del_cliques[i].clone());
        edges.push((eb, pb));
    }
}

/// Decoder subtree: a path of K_r bags, one per independent vertex, with the
/// color-set subtrees hanging off the bags that hold their heads.
fn attach_decoder(
    bags: &mut Vec<Vec<u32>>,
    edges: &mut Vec<(usize, usize)>,
    dec: &DecoderGadget,
    anchor: usize,
) {
    let GadgetKind::Decoding { k_r, indep, .. } = &dec.y.kind else {
        unreachable!()
    };
    let start = bags.len();
    for (z, &iv) in indep.iter().enumerate() {
        let mut bag = k_r.clone();
        bag.push(iv);
        bags.push(bag);
        edges.push(if z == 0 {
            (anchor, start)
        } else {
            (start + z - 1, start + z)
        });
    }
    for (pos, (_, w)) in dec.ws.iter().enumerate() {
        debug_assert_eq!(w.head, Some(indep[1 + pos]));
        attach_color_set(bags, edges, w, start + 1 + pos);
    }
}

fn build_dtc(
    f: &CnfFormula,
    r: u8,
    p0: u32,
    setting: Setting,
    max_vertices: usize,
) -> Result<ReductionInstance, String> {
    f.validate()?;
    if f.num_vars == 0 {
        return Err("formula has no variables".into());
    }
    if f.clauses.is_empty() {
        return Err("formula has no clauses".into());
    }
    if r < 2 {
        return Err("need r >= 2".into());
    }
    if p0 == 0 {
        return Err("need p0 >= 1".into());
    }
    if p0 > 24 {
        return Err("p0 > 24 would overflow the group tables".into());
    }

    let plan = make_plan(f, r, p0, setting);
    let predicted = predicted_vertices(f, r, p0, setting, &plan);
    if predicted > BigUint::from(max_vertices) {
        return Err(format!(
            "construction needs {} vertices, over the limit of {}; raise the cap to proceed",
            predicted, max_vertices
        ));
    }

    let params = ReductionParams {
        r,
        p0,
        t: plan.t,
        p: plan.p,
        level_counts: match setting {
            Setting::Dense => plan.level_counts.clone(),
            Setting::Sparse => Vec::new(),
        },
    };
    let (members, kappa) = build_phi_kappa(setting, &params)?;

    let mut b = InstanceBuilder::new();
    let class_size = match setting {
        Setting::Dense => r as usize,
        Setting::Sparse => 1,
    };

    // central twinclasses and the palette clique
    let mut groups: Vec<Vec<Vec<u32>>> = Vec::with_capacity(plan.t as usize);
    for i in 0..plan.t {
        let mut classes = Vec::with_capacity(plan.p as usize);
        for c in 0..plan.p {
            let tag = format!("u{}_{}", i + 1, c + 1);
            let class: Vec<u32> = (0..class_size).map(|_| b.add_vertex(&tag)).collect();
            if class_size > 1 {
                b.add_clique(&class);
            }
            classes.push(class);
        }
        groups.push(classes);
    }
    let fs: Vec<u32> = (1..=r).map(|s| b.add_vertex(&format!("f{}", s))).collect();
    b.add_clique(&fs);

    let mut packing: Vec<PackingEntry> = Vec::new();
    let mut witnesses: Vec<TreeDecomposition> = Vec::new();

    // forcing structures, one witness per copy
    let mut structure: Vec<StructureGadget> = Vec::new();
    for i in 0..plan.t as usize {
        for &(ell, s) in &plan.set_sizes {
            let lg = pick_critical(r as u32, s);
            for set in k_subsets(plan.p as usize, s as usize) {
                for _copy in 0..plan.copies {
                    let off = embed(&mut b, &lg.graph);
                    let l_verts: Vec<u32> = (off..off + lg.graph.n() as u32).collect();
                    let mut bags = translate_bags(&lg.decomposition, off);
                    let mut edges = lg.decomposition.edges.clone();
                    let mut arrows = Vec::with_capacity(set.len());
                    for (k, &class_idx) in set.iter().enumerate() {
                        let head = off + k as u32;
                        let anchor = bag_containing(&bags, head);
                        let h = match setting {
                            Setting::Dense => {
                                let h =
                                    add_thick_arrow(&mut b, &groups[i][class_idx], head, ell, r)?;
                                attach_thick(&mut bags, &mut edges, &h, anchor);
                                h
                            }
                            Setting::Sparse => {
                                let u = groups[i][class_idx][0];
                                let h = add_thin_arrow(&mut b, u, head, r);
                                attach_thin(&mut bags, &mut edges, &h, anchor, Some(u));
                                h
                            }
                        };
                        packing.extend(h.packing.iter().cloned());
                        arrows.push(h);
                    }
                    witnesses.push(TreeDecomposition { bags, edges });
                    structure.push(StructureGadget {
                        group: i,
                        ell,
                        classes: set.clone(),
                        arrows,
                        l_verts,
                    });
                }
            }
        }
    }

    // decoders for every (clause, group, member) triple
    let full = (1u32 << r) - 1;
    let mut decoders: Vec<DecoderGadget> = Vec::new();
    for j in 0..f.clauses.len() {
        for i in 0..plan.t as usize {
            for (m_idx, member) in members.iter().enumerate() {
                let y = add_decoding_gadget(&mut b, plan.y_indep, r);
                packing.extend(y.packing.iter().cloned());
                let indep = match &y.kind {
                    GadgetKind::Decoding { indep, .. } => indep.clone(),
                    _ => unreachable!(),
                };
                let mut ws = Vec::new();
                let mut cursor = 1usize;
                for (class_idx, &mask) in member.iter().enumerate() {
                    if setting == Setting::Dense && mask == full {
                        continue;
                    }
                    let head = indep[cursor];
                    cursor += 1;
                    let w = add_color_set_gadget(&mut b, &groups[i][class_idx], head, mask, &fs, r)?;
                    match setting {
                        Setting::Dense => packing.extend(w.packing.iter().cloned()),
                        // the sparse lower bound counts plain K_{r+1} pieces,
                        // so each deletion edge goes in on its own
                        Setting::Sparse => {
                            let GadgetKind::ColorSet { del_cliques, .. } = &w.kind else {
                                unreachable!()
                            };
                            for dc in del_cliques {
                                let mut verts = dc.clone();
                                verts.sort_unstable();
                                packing.push(PackingEntry { claim: 1, verts });
                            }
                        }
                    }
                    ws.push((class_idx, w));
                }
                assert_eq!(
                    cursor,
                    indep.len(),
                    "every spare decoder vertex pairs with one class gadget"
                );
                decoders.push(DecoderGadget {
                    clause: j,
                    group: i,
                    member: m_idx,
                    y,
                    ws,
                });
            }
        }
    }

    // clause checkers; each clause witness also carries the decoder subtrees
    // of that clause, arrows tie them to the checker
    let zmin = (f.q() as u64) << p0;
    let zmin = u32::try_from(zmin).map_err(|_| "clause checker size overflows u32".to_string())?;
    let zg = pick_critical(r as u32, zmin);
    let mut clause_gadgets: Vec<ClauseGadget> = Vec::new();
    for (j, clause) in f.clauses.iter().enumerate() {
        let off = embed(&mut b, &zg.graph);
        let z_verts: Vec<u32> = (off..off + zg.graph.n() as u32).collect();
        let mut bags = translate_bags(&zg.decomposition, off);
        let mut edges = zg.decomposition.edges.clone();
        let mut arrows: Vec<(usize, usize, GadgetHandle)> = Vec::new();
        let mut tail_anchor: Vec<Option<usize>> = vec![None; plan.t as usize * members.len()];
        let mut cursor = 0u32;
        for i in 0..plan.t as usize {
            let (lo, hi) = group_span(f.num_vars, p0, i as u32);
            for a in satisfying_indices(clause, lo, hi) {
                let m_idx = kappa.map[a as usize] as usize;
                let dec = &decoders[(j * plan.t as usize + i) * members.len() + m_idx];
                let yhat = match &dec.y.kind {
                    GadgetKind::Decoding { yhat, .. } => *yhat,
                    _ => unreachable!(),
                };
                let head = off + cursor;
                cursor += 1;
                let anchor = bag_containing(&bags, head);
                let h = add_thin_arrow(&mut b, yhat, head, r);
                let tb = attach_thin(&mut bags, &mut edges, &h, anchor, None);
                tail_anchor[i * members.len() + m_idx] = Some(tb);
                packing.extend(h.packing.iter().cloned());
                arrows.push((i, m_idx, h));
            }
        }
        assert!(
            (cursor as usize) <= zg.graph.n(),
            "clause checker must have a private vertex per arrow"
        );
        for i in 0..plan.t as usize {
            for m_idx in 0..members.len() {
                let dec = &decoders[(j * plan.t as usize + i) * members.len() + m_idx];
                let anchor = tail_anchor[i * members.len() + m_idx].unwrap_or(0);
                attach_decoder(&mut bags, &mut edges, dec, anchor);
            }
        }
        witnesses.push(TreeDecomposition { bags, edges });
        clause_gadgets.push(ClauseGadget { z_verts, arrows });
    }

    let g = b.finish();
    assert_eq!(
        BigUint::from(g.n()),
        predicted,
        "size prediction must match the built graph"
    );

    let mut modulator: Vec<Vec<u32>> = Vec::new();
    for classes in &groups {
        for class in classes {
            modulator.push(class.clone());
        }
    }
    for &fv in &fs {
        modulator.push(vec![fv]);
    }

    // pieces must be pairwise disjoint and stay clear of the modulator
    let mut claimed = vec![false; g.n()];
    for class in &modulator {
        for &v in class {
            claimed[v as usize] = true;
        }
    }
    let mut cost_packing = 0u32;
    for piece in &packing {
        cost_packing += piece.claim;
        for &v in &piece.verts {
            assert!(!claimed[v as usize], "packing pieces overlap at vertex {}", v);
            claimed[v as usize] = true;
        }
    }

    let budget = u32::try_from(cost_packing as u64 + plan.t as u64 * plan.group_deletions)
        .map_err(|_| "budget overflows u32".to_string())?;

    Ok(ReductionInstance {
        kind: match setting {
            Setting::Dense => ReductionKind::Dense,
            Setting::Sparse => ReductionKind::Sparse,
        },
        graph: g,
        budget,
        modulator,
        packing,
        cost_packing,
        central: fs,
        kappas: vec![kappa; plan.t as usize],
        witnesses,
        witness_width: r as u32,
        params: Some(params),
        dtc: Some(Box::new(DtcLayout {
            setting,
            formula: f.clone(),
            groups,
            members,
            structure,
            decoders,
            clauses: clause_gadgets,
        })),
        vc: None,
    })
}

fn decide(state: &mut [Option<u8>], v: u32, val: u8) -> Result<(), String> {
    match state[v as usize] {
        None => {
            state[v as usize] = Some(val);
            Ok(())
        }
        Some(old) => Err(format!(
            "vertex {} decided twice ({} then {})",
            v, old, val
        )),
    }
}

/// Replays the construction on a satisfying assignment and returns a
/// solution of cost exactly the instance budget.
pub fn forward_solution(inst: &ReductionInstance, tau: &[bool]) -> Result<Solution, String> {
    let layout = inst
        .dtc
        .as_deref()
        .ok_or("instance carries no construction layout")?;
    let f = &layout.formula;
    if tau.len() != f.num_vars as usize {
        return Err(format!(
            "assignment has {} values for {} variables",
            tau.len(),
            f.num_vars
        ));
    }
    if !f.is_satisfied_by(tau) {
        return Err("assignment does not satisfy the formula".into());
    }
    let params = inst.params.as_ref().ok_or("instance carries no parameters")?;
    let (r, p0) = (params.r, params.p0);
    let g = &inst.graph;
    let mut state: Vec<Option<u8>> = vec![None; g.n()];

    // the palette clique keeps one color per vertex
    for (s, &fv) in inst.central.iter().enumerate() {
        decide(&mut state, fv, s as u8 + 1)?;
    }

    // each group colors its classes like the member its variables select
    let mut chosen = Vec::with_capacity(layout.groups.len());
    let mut buf = vec![0u8; g.n()];
    for (i, classes) in layout.groups.iter().enumerate() {
        let (lo, hi) = group_span(f.num_vars, p0, i as u32);
        let mut idx = 0u32;
        for v in lo..hi {
            if tau[v as usize] {
                idx |= 1 << (v - lo);
            }
        }
        let m_idx = inst.kappas[i].map[idx as usize] as usize;
        chosen.push(m_idx);
        for (c, class) in classes.iter().enumerate() {
            phi::assign_class_colors(layout.members[m_idx][c], class, &mut buf);
            for &v in class {
                decide(&mut state, v, buf[v as usize])?;
            }
        }
    }

    // fired arrows delete their private head, idle ones pay inside
    for sg in &layout.structure {
        for (k, arrow) in sg.arrows.iter().enumerate() {
            let class = &layout.groups[sg.group][sg.classes[k]];
            let gone = class
                .iter()
                .filter(|&&v| state[v as usize] == Some(0))
                .count();
            match &arrow.kind {
                GadgetKind::ThickArrow { k_ell, indep, .. } => {
                    if gone >= sg.ell as usize {
                        for &z in indep {
                            decide(&mut state, z, 0)?;
                        }
                        decide(&mut state, arrow.head.unwrap(), 0)?;
                    } else {
                        for &x in k_ell {
                            decide(&mut state, x, 0)?;
                        }
                    }
                }
                GadgetKind::ThinArrow { w, .. } => {
                    if gone >= 1 {
                        decide(&mut state, arrow.head.unwrap(), 0)?;
                    } else {
                        decide(&mut state, *w, 0)?;
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    // the chosen member surrenders its distinguished vertex, every other
    // decoder pays inside its clique; a class gadget fires when the kept
    // colors fit its allowed set
    let full = (1u32 << r) - 1;
    for dec in &layout.decoders {
        let ch = chosen[dec.group];
        let (yhat, k_r) = match &dec.y.kind {
            GadgetKind::Decoding { yhat, k_r, .. } => (*yhat, k_r),
            _ => unreachable!(),
        };
        if dec.member == ch {
            decide(&mut state, yhat, 0)?;
        } else {
            decide(&mut state, k_r[0], 0)?;
        }
        for &(class_idx, ref w) in &dec.ws {
            let allowed = layout.members[dec.member][class_idx];
            let kept = layout.members[ch][class_idx];
            let (odd, even, w_last) = match &w.kind {
                GadgetKind::ColorSet {
                    odd, even, w_last, ..
                } => (odd, even, *w_last),
                _ => unreachable!(),
            };
            if kept & !allowed & full == 0 {
                for &e in even {
                    decide(&mut state, e, 0)?;
                }
                decide(&mut state, w.head.unwrap(), 0)?;
            } else {
                for &o in odd {
                    decide(&mut state, o, 0)?;
                }
                decide(&mut state, w_last, 0)?;
            }
        }
    }

    // a deleted tail lets the clause checker lose a private vertex
    for cg in &layout.clauses {
        for (_, _, arrow) in &cg.arrows {
            let w = match &arrow.kind {
                GadgetKind::ThinArrow { w, .. } => *w,
                _ => unreachable!(),
            };
            if state[arrow.attachments[0] as usize] == Some(0) {
                decide(&mut state, arrow.head.unwrap(), 0)?;
            } else {
                decide(&mut state, w, 0)?;
            }
        }
    }

    color_rest(g, &mut state, r)?;

    let colors: Vec<u8> = state.into_iter().map(|s| s.unwrap()).collect();
    let sol = Solution::new(colors);
    if sol.cost() != inst.budget {
        return Err(format!(
            "construction spent {} deletions, budget is {}",
            sol.cost(),
            inst.budget
        ));
    }
    sol.check(g, r)
        .map_err(|e| format!("replay produced an improper coloring: {}", e))?;
    Ok(sol)
}

/// Colors every undecided vertex, treating decided neighbors as fixed. The
/// deletions above leave only small components, each near a tree of cliques,
/// so a most-constrained-first search finishes immediately.
fn color_rest(g: &Graph, state: &mut [Option<u8>], r: u8) -> Result<(), String> {
    let full = (1u32 << r) - 1;
    let mut seen = vec![false; g.n()];
    for v0 in g.vertices() {
        if state[v0 as usize].is_some() || seen[v0 as usize] {
            continue;
        }
        let mut comp = vec![v0];
        seen[v0 as usize] = true;
        let mut qi = 0;
        while qi < comp.len() {
            let x = comp[qi];
            qi += 1;
            for &y in g.neighbors(x) {
                if state[y as usize].is_none() && !seen[y as usize] {
                    seen[y as usize] = true;
                    comp.push(y);
                }
            }
        }
        comp.sort_unstable();
        let mut lists: Vec<u32> = vec![full; comp.len()];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); comp.len()];
        for (li, &x) in comp.iter().enumerate() {
            for &y in g.neighbors(x) {
                match state[y as usize] {
                    Some(0) => {}
                    Some(c) => lists[li] &= !(1 << (c - 1)),
                    None => adj[li].push(comp.binary_search(&y).unwrap()),
                }
            }
        }
        let mut colors = vec![0u8; comp.len()];
        if !assign_lists(&adj, &mut lists, &mut colors) {
            return Err(format!(
                "component around vertex {} is not list-colorable",
                v0
            ));
        }
        for (li, &x) in comp.iter().enumerate() {
            state[x as usize] = Some(colors[li]);
        }
    }
    Ok(())
}

/// Backtracking list coloring, most constrained vertex first.
fn assign_lists(adj: &[Vec<usize>], lists: &mut [u32], colors: &mut [u8]) -> bool {
    let pick = (0..lists.len())
        .filter(|&i| colors[i] == 0)
        .min_by_key(|&i| lists[i].count_ones());
    let Some(i) = pick else {
        return true;
    };
    let mut avail = lists[i];
    while avail != 0 {
        let bit = avail.trailing_zeros();
        avail &= avail - 1;
        colors[i] = bit as u8 + 1;
        let mut touched = Vec::new();
        let mut dead = false;
        for &j in &adj[i] {
            if colors[j] == 0 && lists[j] & (1 << bit) != 0 {
                lists[j] &= !(1 << bit);
                touched.push(j);
                if lists[j] == 0 {
                    dead = true;
                }
            }
        }
        if !dead && assign_lists(adj, lists, colors) {
            return true;
        }
        for &j in &touched {
            lists[j] |= 1 << bit;
        }
        colors[i] = 0;
    }
    false
}
