//! Standard small groups used by the test grids and the self-test.

use crate::group::{FiniteGroup, DEFAULT_SIZE_BOUND};

pub fn cyclic(n: u32) -> FiniteGroup {
    assert!(n >= 1);
    let rows: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    FiniteGroup::from_table(&rows).expect("cyclic table is a group")
}

/// Direct product; `(a, b)` has index `a * |H| + b`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let (m, n) = (g.order() as u32, h.order() as u32);
    let ge: Vec<_> = g.elements().collect();
    let he: Vec<_> = h.elements().collect();
    let rows: Vec<Vec<u32>> = (0..m * n)
        .map(|x| {
            (0..m * n)
                .map(|y| {
                    let a = g.mul(ge[(x / n) as usize], ge[(y / n) as usize]).0;
                    let b = h.mul(he[(x % n) as usize], he[(y % n) as usize]).0;
                    a * n + b
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(&rows).expect("product of groups is a group")
}

/// Symmetries of a regular `n`-gon, order `2n`, for `n >= 3`.
pub fn dihedral(n: u32) -> FiniteGroup {
    assert!(n >= 3);
    let rotation: Vec<u32> = (0..n).map(|i| (i + 1) % n).collect();
    let reflection: Vec<u32> = (0..n).map(|i| (n - i) % n).collect();
    FiniteGroup::from_permutations(&[rotation, reflection], DEFAULT_SIZE_BOUND).expect("dihedral closure")
}

pub fn symmetric(n: u32) -> FiniteGroup {
    if n < 2 {
        return FiniteGroup::trivial();
    }
    let mut swap: Vec<u32> = (0..n).collect();
    swap.swap(0, 1);
    let cycle: Vec<u32> = (0..n).map(|i| (i + 1) % n).collect();
    FiniteGroup::from_permutations(&[swap, cycle], DEFAULT_SIZE_BOUND).expect("symmetric closure")
}

/// Generated by the 3-cycles `(0 1 k)`.
pub fn alternating(n: u32) -> FiniteGroup {
    if n < 3 {
        return FiniteGroup::trivial();
    }
    let gens: Vec<Vec<u32>> = (2..n)
        .map(|k| {
            let mut p: Vec<u32> = (0..n).collect();
            p[0] = 1;
            p[1] = k;
            p[k as usize] = 0;
            p
        })
        .collect();
    FiniteGroup::from_permutations(&gens, DEFAULT_SIZE_BOUND).expect("alternating closure")
}

/// `<a, b | a^{2m}, b^2 = a^m, b a b^-1 = a^-1>`, order `4m`.
///
/// `a^k b^j` has index `k + 2m j`.
pub fn dicyclic(m: u32) -> FiniteGroup {
    assert!(m >= 2);
    let n = 2 * m;
    let rows: Vec<Vec<u32>> = (0..2 * n)
        .map(|x| {
            let (k1, j1) = (x % n, x / n);
            (0..2 * n)
                .map(|y| {
                    let (k2, j2) = (y % n, y / n);
                    let mut k = if j1 == 0 { k1 + k2 } else { k1 + n - k2 };
                    let mut j = j1 + j2;
                    if j == 2 {
                        j = 0;
                        k += m;
                    }
                    k % n + n * j
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(&rows).expect("dicyclic table is a group")
}

pub fn quaternion() -> FiniteGroup {
    dicyclic(2)
}

/// One group from each isomorphism class of order at most 12 (24 classes).
pub fn groups_up_to_order_12() -> Vec<(String, FiniteGroup)> {
    let c = cyclic;
    vec![
        ("C1".into(), FiniteGroup::trivial()),
        ("C2".into(), c(2)),
        ("C3".into(), c(3)),
        ("C4".into(), c(4)),
        ("C2xC2".into(), direct_product(&c(2), &c(2))),
        ("C5".into(), c(5)),
        ("C6".into(), c(6)),
        ("S3".into(), symmetric(3)),
        ("C7".into(), c(7)),
        ("C8".into(), c(8)),
        ("C4xC2".into(), direct_product(&c(4), &c(2))),
        ("C2xC2xC2".into(), direct_product(&direct_product(&c(2), &c(2)), &c(2))),
        ("D4".into(), dihedral(4)),
        ("Q8".into(), quaternion()),
        ("C9".into(), c(9)),
        ("C3xC3".into(), direct_product(&c(3), &c(3))),
        ("C10".into(), c(10)),
        ("D5".into(), dihedral(5)),
        ("C11".into(), c(11)),
        ("C12".into(), c(12)),
        ("C6xC2".into(), direct_product(&c(6), &c(2))),
        ("D6".into(), dihedral(6)),
        ("A4".into(), alternating(4)),
        ("Dic3".into(), dicyclic(3)),
    ]
}

/// A spread of groups of order at most 24, abelian and not.
pub fn groups_up_to_order_24() -> Vec<(String, FiniteGroup)> {
    let mut out = groups_up_to_order_12();
    for n in 13..=24 {
        out.push((format!("C{n}"), cyclic(n)));
    }
    for n in 7..=12 {
        out.push((format!("D{n}"), dihedral(n)));
    }
    out.push(("Dic4".into(), dicyclic(4)));
    out.push(("Dic5".into(), dicyclic(5)));
    out.push(("Dic6".into(), dicyclic(6)));
    out.push(("S4".into(), symmetric(4)));
    out.push(("C3xS3".into(), direct_product(&cyclic(3), &symmetric(3))));
    out.push(("C2xA4".into(), direct_product(&cyclic(2), &alternating(4))));
    out.push(("C2xQ8".into(), direct_product(&cyclic(2), &quaternion())));
    out.push(("C2xD4".into(), direct_product(&cyclic(2), &dihedral(4))));
    out.push(("C4xC4".into(), direct_product(&cyclic(4), &cyclic(4))));
    out.push(("C3xC6".into(), direct_product(&cyclic(3), &cyclic(6))));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Element;

    fn order_profile(g: &FiniteGroup) -> Vec<u64> {
        let mut v: Vec<u64> = g.elements().map(|a| g.element_order(a)).collect();
        v.sort_unstable();
        v
    }

    fn is_abelian(g: &FiniteGroup) -> bool {
        g.elements().all(|a| g.elements().all(|b| g.mul(a, b) == g.mul(b, a)))
    }

    #[test]
    fn orders() {
        let groups = groups_up_to_order_12();
        assert_eq!(groups.len(), 24);
        let mut counts = [0usize; 13];
        for (_, g) in &groups {
            counts[g.order()] += 1;
        }
        assert_eq!(counts, [0, 1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5]);
        for (_, g) in groups_up_to_order_24() {
            assert!(g.order() <= 24);
        }
    }

    #[test]
    fn order_profiles_separate_classes() {
        // Groups of equal order in the list are pairwise non-isomorphic.
        let groups = groups_up_to_order_12();
        for (i, (na, a)) in groups.iter().enumerate() {
            for (nb, b) in &groups[i + 1..] {
                if a.order() == b.order() {
                    let differ = order_profile(a) != order_profile(b) || is_abelian(a) != is_abelian(b);
                    assert!(differ, "{na} and {nb} look alike");
                }
            }
        }
    }

    #[test]
    fn quaternion_has_one_involution() {
        let q = quaternion();
        assert_eq!(q.elements().filter(|&a| q.element_order(a) == 2).count(), 1);
        assert_eq!(q.element_order(Element(1)), 4);
        let d4 = dihedral(4);
        assert_eq!(d4.elements().filter(|&a| d4.element_order(a) == 2).count(), 5);
    }

    #[test]
    fn alternating_and_symmetric() {
        assert_eq!(alternating(4).order(), 12);
        assert_eq!(alternating(5).order(), 60);
        assert_eq!(symmetric(4).order(), 24);
        assert_eq!(symmetric(3).exponent(), 6);
    }
}
