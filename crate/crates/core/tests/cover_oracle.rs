//! First homology of regular covers computed twice: through the
//! Reidemeister-Schreier presentation, and from the cellular chain complex of
//! the cover via Fox derivatives.
//!
//! With `C1 = Z[G]^g` and `∂2` given by the Fox Jacobian,
//! `C1 / im ∂2 = H1 ⊕ Z^{|G|-1}` because `im ∂1` is the free augmentation ideal.

use std::sync::Arc;

use handlebody_core::catalog::{cyclic, dihedral, direct_product, quaternion, symmetric};
use handlebody_core::homology::cokernel;
use handlebody_core::seifert::seifert_presentation;
use handlebody_core::word::Letter;
use handlebody_core::*;
use num_bigint::BigInt;
use proptest::prelude::*;

fn fox_h1(p: &GroupPresentation, action: &HandlebodyAction) -> AbelianGroupStructure {
    let group = action.group();
    let images = action.images();
    let (size, g) = (group.order(), p.generator_count());
    let rels = p.relators();
    let mut m = IntegerMatrix::zeros(rels.len() * size, g * size);
    for (r, word) in rels.iter().enumerate() {
        for h in group.elements() {
            let row = r * size + h.index();
            let mut prefix = h;
            for &Letter { generator, inverse } in word.letters() {
                let x = images[generator];
                if inverse {
                    prefix = group.mul(prefix, group.inv(x));
                    m[(row, generator * size + prefix.index())] -= 1;
                } else {
                    m[(row, generator * size + prefix.index())] += 1;
                    prefix = group.mul(prefix, x);
                }
            }
        }
    }
    let mut h = cokernel(&m);
    h.free_rank -= size - 1;
    h
}

fn actions() -> Vec<HandlebodyAction> {
    let mut out = Vec::new();
    let groups = [
        cyclic(2),
        cyclic(3),
        cyclic(4),
        direct_product(&cyclic(2), &cyclic(2)),
        symmetric(3),
        quaternion(),
        dihedral(4),
    ];
    for group in groups {
        let group = Arc::new(group);
        for g in [2usize, 3] {
            let cap = group.order().pow(g as u32);
            for idx in (0..cap).step_by(7) {
                let mut t = Vec::with_capacity(g);
                let mut x = idx;
                for _ in 0..g {
                    t.push(Element((x % group.order()) as u32));
                    x /= group.order();
                }
                if let Ok(a) = HandlebodyAction::new(group.clone(), g, t) {
                    out.push(a);
                }
            }
        }
    }
    out
}

#[test]
fn seifert_presentations_agree() {
    let mut checked = 0;
    for a in actions() {
        let g = a.quotient_genus();
        for k in 1..=2 {
            let n = a.group().exponent() * k;
            let p = seifert_presentation(g, n).unwrap();
            assert_eq!(cover_h1(&p, &a).unwrap(), fox_h1(&p, &a), "{:?} n={n}", a.images());
            checked += 1;
        }
    }
    assert!(checked > 50);
}

#[test]
fn hand_computed_double_cover() {
    let a = HandlebodyAction::new(Arc::new(cyclic(2)), 2, vec![Element(1), Element(1)]).unwrap();
    let p = seifert_presentation(2, 2).unwrap();
    let h = fox_h1(&p, &a);
    assert_eq!(h.free_rank, 0);
    assert_eq!(h.invariant_factors, [BigInt::from(4)]);
}

#[test]
fn free_covers_agree() {
    for a in actions() {
        let p = GroupPresentation::new(a.quotient_genus(), vec![]).unwrap();
        let h = cover_h1(&p, &a).unwrap();
        assert_eq!(h, fox_h1(&p, &a));
        assert_eq!(h.free_rank as i64, a.total_genus());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Relators of the form w^e lie in the kernel for any word w.
    #[test]
    fn random_kernel_relators_agree(
        pick in 0usize..1000,
        words in prop::collection::vec(prop::collection::vec((0usize..2, any::<bool>()), 1..6), 1..4),
    ) {
        let all: Vec<_> = actions().into_iter().filter(|a| a.quotient_genus() == 2).collect();
        let a = &all[pick % all.len()];
        let e = a.group().exponent() as i64;
        let rels: Vec<FreeWord> = words
            .into_iter()
            .map(|ls| FreeWord::from_letters(2, ls.into_iter().map(|(g, i)| Letter::new(g, i))).unwrap().pow(e))
            .collect();
        let p = GroupPresentation::new(2, rels).unwrap();
        prop_assert_eq!(cover_h1(&p, a).unwrap(), fox_h1(&p, a));
    }
}
