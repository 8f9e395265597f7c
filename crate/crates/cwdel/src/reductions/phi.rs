//! Canonical families of partial solutions on one modulator group, shared by
//! the dense and sparse instance compilers.
//!
//! A member assigns every class of the group a kept-color set, encoded as a
//! bitmask with bit c-1 for color c; the class vertices beyond the kept
//! colors are deleted. Dense groups consist of twinclasses of size r and
//! prescribe, for each possible number of deletions l, how many classes lose
//! exactly l vertices. Sparse groups are single vertices, so a member either
//! keeps a color (singleton mask) or deletes (empty mask), with a fixed
//! number of deletions in total. Members are ordered lexicographically over
//! the classes, comparing kept sets by size first and mask value second;
//! truth assignments map onto a prefix of this order.

use num_bigint::BigUint;

use super::{dense_level_counts, factorial};

/// One kept-color mask per class, classes in creation order.
pub type PhiMember = Vec<u32>;

/// All subsets of [r], ordered by size and then by mask value.
pub fn ranked_subsets(r: u8) -> Vec<u32> {
    let mut subs: Vec<u32> = (0..1u32 << r).collect();
    subs.sort_by_key(|m| (m.count_ones(), *m));
    subs
}

/// Sparse per-level counts: the kept vertices, then the forced deletions.
pub fn sparse_level_counts(r: u8, p: u32) -> Vec<u32> {
    let parts = r as u32 + 1;
    assert!(p % parts == 0, "p must be divisible by r+1");
    vec![p - p / parts, p / parts]
}

fn push_members(
    remaining: u32,
    class_size: u8,
    subs: &[u32],
    avail: &mut [u32],
    member: &mut Vec<u32>,
    out: &mut Vec<PhiMember>,
) {
    if remaining == 0 {
        out.push(member.clone());
        return;
    }
    for &s in subs {
        let level = (class_size as u32 - s.count_ones()) as usize;
        if avail[level] == 0 {
            continue;
        }
        avail[level] -= 1;
        member.push(s);
        push_members(remaining - 1, class_size, subs, avail, member, out);
        member.pop();
        avail[level] += 1;
    }
}

/// Members over classes of `class_size` vertices with the given per-level
/// deletion counts, in canonical order.
fn enumerate_members(r: u8, class_size: u8, level_counts: &[u32]) -> Vec<PhiMember> {
    let p: u32 = level_counts.iter().sum();
    let subs: Vec<u32> = ranked_subsets(r)
        .into_iter()
        .filter(|m| m.count_ones() <= class_size as u32)
        .collect();
    let mut avail = level_counts.to_vec();
    let mut member = Vec::with_capacity(p as usize);
    let mut out = Vec::new();
    push_members(p, class_size, &subs, &mut avail, &mut member, &mut out);
    out
}

pub fn enumerate_dense_members(r: u8, p: u32) -> Vec<PhiMember> {
    enumerate_members(r, r, &dense_level_counts(r, p))
}

pub fn enumerate_sparse_members(r: u8, p: u32) -> Vec<PhiMember> {
    enumerate_members(r, 1, &sparse_level_counts(r, p))
}

pub(crate) fn binom(n: u32, k: u32) -> BigUint {
    assert!(k <= n);
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Member count in closed form: the multinomial over the level pattern times
/// the number of kept-set choices per class of each level.
fn phi_size(r: u8, class_size: u8, level_counts: &[u32]) -> BigUint {
    let p: u32 = level_counts.iter().sum();
    let mut size = factorial(p);
    for (level, &c) in level_counts.iter().enumerate() {
        size /= factorial(c);
        size *= binom(r as u32, class_size as u32 - level as u32).pow(c);
    }
    size
}

pub fn dense_phi_size(r: u8, p: u32) -> BigUint {
    phi_size(r, r, &dense_level_counts(r, p))
}

pub fn sparse_phi_size(r: u8, p: u32) -> BigUint {
    phi_size(r, 1, &sparse_level_counts(r, p))
}

/// A group encoding p0 variables needs one member per truth assignment.
pub fn ensure_encodable(size: &BigUint, p0: u32) -> Result<(), String> {
    if *size >= BigUint::from(1u32) << p0 {
        Ok(())
    } else {
        Err(format!(
            "family has {} members, too few for {} assignment bits",
            size, p0
        ))
    }
}

/// Writes the canonical representative of a kept-color set onto a class:
/// kept colors ascending on the lowest vertex ids, the rest deleted (0).
pub fn assign_class_colors(kept_mask: u32, class: &[u32], colors: &mut [u8]) {
    debug_assert!(class.windows(2).all(|w| w[0] < w[1]), "class ids unsorted");
    let mut kept = (0u8..32).filter(|b| kept_mask >> b & 1 == 1).map(|b| b + 1);
    for &v in class {
        colors[v as usize] = kept.next().unwrap_or(0);
    }
}

/// Deletions a member performs on its group.
pub fn member_deletions(member: &[u32], class_size: u8) -> u32 {
    member
        .iter()
        .map(|m| class_size as u32 - m.count_ones())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_ranking_for_r3() {
        assert_eq!(ranked_subsets(3), vec![0, 1, 2, 4, 3, 5, 6, 7]);
        assert_eq!(ranked_subsets(2), vec![0, 1, 2, 3]);
    }

    #[test]
    fn dense_enumeration_matches_closed_form() {
        let small = enumerate_dense_members(2, 4);
        assert_eq!(small.len(), 48);
        assert_eq!(dense_phi_size(2, 4), 48u32.into());

        let desk = enumerate_dense_members(2, 8);
        assert_eq!(desk.len(), 6720);
        assert_eq!(dense_phi_size(2, 8), 6720u32.into());
        assert_eq!(desk[0], vec![0, 0, 1, 1, 1, 1, 3, 3]);
        for member in &desk {
            assert_eq!(member_deletions(member, 2), 8);
            let mut histogram = [0u32; 3];
            for m in member {
                histogram[2 - m.count_ones() as usize] += 1;
            }
            assert_eq!(histogram, [2, 4, 2]);
        }
    }

    #[test]
    fn dense_size_for_r3_without_enumerating() {
        assert_eq!(dense_phi_size(3, 8), 816480u32.into());
    }

    #[test]
    fn sparse_enumeration_matches_closed_form() {
        let members = enumerate_sparse_members(2, 3);
        assert_eq!(members.len(), 12);
        assert_eq!(sparse_phi_size(2, 3), 12u32.into());
        assert_eq!(members[0], vec![0, 1, 1]);
        for member in &members {
            assert_eq!(member_deletions(member, 1), 1);
            for &m in member {
                assert!(m.count_ones() <= 1);
            }
        }
        assert_eq!(enumerate_sparse_members(3, 4).len(), 108);
        assert_eq!(sparse_phi_size(3, 4), 108u32.into());
    }

    #[test]
    fn members_come_out_in_rank_order() {
        let ranks = ranked_subsets(2);
        let rank_of = |m: u32| ranks.iter().position(|&s| s == m).unwrap();
        let members = enumerate_dense_members(2, 4);
        for pair in members.windows(2) {
            let a: Vec<usize> = pair[0].iter().map(|&m| rank_of(m)).collect();
            let b: Vec<usize> = pair[1].iter().map(|&m| rank_of(m)).collect();
            assert!(a < b, "members out of order: {:?} then {:?}", pair[0], pair[1]);
        }
    }

    #[test]
    fn encodability_check() {
        assert!(ensure_encodable(&12u32.into(), 3).is_ok());
        let err = ensure_encodable(&12u32.into(), 4).unwrap_err();
        assert!(err.contains("12 members"));
    }

    #[test]
    fn class_color_assignment_is_ascending_on_lowest_ids() {
        let mut colors = vec![9u8; 10];
        assign_class_colors(0b010, &[5, 9], &mut colors);
        assert_eq!(colors[5], 2);
        assert_eq!(colors[9], 0);
        assign_class_colors(0b101, &[4, 7, 8], &mut colors);
        assert_eq!(colors[4], 1);
        assert_eq!(colors[7], 3);
        assert_eq!(colors[8], 0);
    }
}
