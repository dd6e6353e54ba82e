//! The Seifert-fibered extension of a free handlebody action.
//!
//! For an action with quotient genus `g >= 2` and a twist order `n`
//! divisible by every element order, the closed manifold `Y` is `W` with
//! 2-handles attached along `x_i^n (x_1 ... x_g)^-n`. The twist script turns
//! this into surgery on a keychain link: an unknot `L` at `(1 - g n)/n`
//! threaded by fibers `L_1..L_g` at `-n/(n - 1)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::action::HandlebodyAction;
use crate::group::Element;
use crate::homology::{h1_from_presentation, AbelianGroupStructure, GroupPresentation, HomologyError};
use crate::surgery::{h1_from_surgery, Component, RationalCoefficient, SurgeryDiagram, SurgeryError};
use crate::word::{attaching_words, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtensionError {
    #[error(
        "quotient genus {0} < 2: genus 0 forces the trivial group and every genus-1 action is \
         equivalent to a cyclic rotation, so those cases are handled separately"
    )]
    GenusTooSmall(usize),
    #[error("n = {n} is not divisible by the group exponent {exponent}: the attaching curves would not map to the identity")]
    NotDivisibleByExponent { n: u64, exponent: u64 },
    #[error("n must be a positive integer")]
    NonPositiveTwist,
    #[error("n = {0} leaves the coefficient -1 - 1/(n-1) undefined; need n >= 2")]
    TwistTooSmall(u64),
    #[error("relator {index} does not map to the identity under the induced homomorphism")]
    RelatorNotKilled { index: usize },
    #[error("not a keychain diagram: {0}")]
    NotKeychain(String),
    #[error("invalid Seifert invariants: {0}")]
    InvalidInvariants(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
}

/// `{b; (o1, 0); (α_1, β_1), ..., (α_k, β_k)}` over an orientable genus-0 base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertInvariants {
    pub b: BigInt,
    pub base_genus: u32,
    pub exceptional: Vec<(BigInt, BigInt)>,
}

impl SeifertInvariants {
    pub fn new(b: impl Into<BigInt>, exceptional: Vec<(BigInt, BigInt)>) -> Result<Self, ExtensionError> {
        let s = SeifertInvariants { b: b.into(), base_genus: 0, exceptional };
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> Result<(), ExtensionError> {
        for (a, b) in &self.exceptional {
            if *a < BigInt::from(2) {
                return Err(ExtensionError::InvalidInvariants(format!("α = {a} is below 2")));
            }
            if !a.gcd(b).is_one() {
                return Err(ExtensionError::InvalidInvariants(format!("gcd({a}, {b}) != 1")));
            }
        }
        Ok(())
    }

    pub fn is_normalized(&self) -> bool {
        self.exceptional.iter().all(|(a, b)| b.is_positive() && b < a)
    }

    /// `-(b + Σ β_i/α_i)`
    pub fn euler_number(&self) -> BigRational {
        let sum = self
            .exceptional
            .iter()
            .fold(BigRational::from_integer(self.b.clone()), |acc, (a, b)| {
                acc + BigRational::new(b.clone(), a.clone())
            });
        -sum
    }
}

impl fmt::Display for SeifertInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}; (o1, {})", self.b, self.base_genus)?;
        for (a, b) in &self.exceptional {
            write!(f, "; ({a}, {b})")?;
        }
        f.write_str("}")
    }
}

impl Serialize for SeifertInvariants {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            #[serde(with = "crate::bigint_serde")]
            b: &'a BigInt,
            base: (&'static str, u32),
            #[serde(with = "crate::bigint_serde::matrix")]
            fibers: Vec<Vec<BigInt>>,
            text: String,
        }
        Repr {
            b: &self.b,
            base: ("o1", self.base_genus),
            fibers: self.exceptional.iter().map(|(a, b)| vec![a.clone(), b.clone()]).collect(),
            text: self.to_string(),
        }
        .serialize(s)
    }
}

pub fn euler_number(s: &SeifertInvariants) -> BigRational {
    s.euler_number()
}

/// Bring every `β_i` into `(0, α_i)`, folding the integer parts into `b`
/// so the Euler number is unchanged.
pub fn normalize_seifert(s: &SeifertInvariants) -> Result<SeifertInvariants, ExtensionError> {
    s.check()?;
    let mut b = s.b.clone();
    let mut exceptional = Vec::with_capacity(s.exceptional.len());
    for (alpha, beta) in &s.exceptional {
        let (k, r) = beta.div_mod_floor(alpha);
        if r.is_zero() {
            return Err(ExtensionError::InvalidInvariants(format!(
                "β = {beta} is divisible by α = {alpha}: not an exceptional fiber"
            )));
        }
        b += k;
        exceptional.push((alpha.clone(), r));
    }
    Ok(SeifertInvariants { b, base_genus: s.base_genus, exceptional })
}

/// `{0; (o1,0); (n,1-n) × g, (n, gn-1)}` or normalized
/// `{-1; (o1,0); (n,1) × g, (n, n-1)}`. For `n = 1` no fiber is exceptional
/// and the family collapses to `{g-1; (o1,0)}`.
pub fn seifert_invariants_closed_form(g: u64, n: u64, normalized: bool) -> Result<SeifertInvariants, ExtensionError> {
    if g < 2 {
        return Err(ExtensionError::GenusTooSmall(g as usize));
    }
    if n == 0 {
        return Err(ExtensionError::NonPositiveTwist);
    }
    let (gi, ni) = (BigInt::from(g), BigInt::from(n));
    if n == 1 {
        return SeifertInvariants::new(gi - 1, Vec::new());
    }
    let mut exceptional = Vec::new();
    let b = if normalized {
        exceptional.extend((0..g).map(|_| (ni.clone(), BigInt::one())));
        exceptional.push((ni.clone(), &ni - 1));
        BigInt::from(-1)
    } else {
        exceptional.extend((0..g).map(|_| (ni.clone(), 1 - &ni)));
        exceptional.push((ni.clone(), &gi * &ni - 1));
        BigInt::zero()
    };
    SeifertInvariants::new(b, exceptional)
}

fn coeff(a: impl Into<BigInt>, b: impl Into<BigInt>) -> RationalCoefficient {
    RationalCoefficient::new(a, b).expect("not 0/0")
}

/// The keychain with the closed-form coefficients: `L` first, then `L_1..L_g`.
pub fn keychain_diagram(g: usize, n: u64) -> SurgeryDiagram {
    let (gi, ni) = (BigInt::from(g), BigInt::from(n));
    let mut comps = vec![Component::new("L", coeff(1 - &gi * &ni, ni.clone()), "parallel to C")];
    for i in 1..=g {
        comps.push(Component::new(format!("L{i}"), coeff(-&ni, &ni - 1), format!("parallel to l{i}")));
    }
    let mut d = SurgeryDiagram::unlinked(comps);
    for i in 1..=g {
        d = d.with_linking(0, i, 1).expect("indices in range");
    }
    d
}

/// Intermediate coefficients of the twist script, for reporting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScriptStage {
    pub step: String,
    pub coefficients: Vec<String>,
}

/// Replay the twist script on unfilled `L, L_1..L_g`:
///
/// 1. `n` twists along `C` give `L` coefficient `1/n`;
/// 2. `-(n - 1)` twists along each `l_i` give `L_i` coefficient `-1/(n-1)`;
/// 3. a `-1` disc twist per handle with crossing vector `(L: +1, L_i: -1)`,
///    ending at `L_i = -n/(n-1)`, `L = (1 - g n)/n` and `lk(L, L_i) = 1`.
///
/// Linking during steps 1–2 is zero: those twists happen on the Heegaard
/// surface, away from the other components.
pub fn scripted_seifert_diagram(g: usize, n: u64) -> Result<(SurgeryDiagram, Vec<ScriptStage>), ExtensionError> {
    if g < 2 {
        return Err(ExtensionError::GenusTooSmall(g));
    }
    if n == 0 {
        return Err(ExtensionError::NonPositiveTwist);
    }
    let ni = BigInt::from(n);
    let mut comps = vec![Component::new("L", RationalCoefficient::infinity(), "parallel to C")];
    for i in 1..=g {
        comps.push(Component::new(format!("L{i}"), RationalCoefficient::infinity(), format!("parallel to l{i}")));
    }
    let mut d = SurgeryDiagram::unlinked(comps);
    let mut stages = Vec::new();
    let snapshot = |d: &SurgeryDiagram, step: String| ScriptStage {
        step,
        coefficients: d.components().iter().map(|c| c.coefficient.to_string()).collect(),
    };

    d = d.rolfsen_twist(0, &ni)?;
    stages.push(snapshot(&d, format!("{n} twists along C")));
    let back: BigInt = 1 - &ni;
    for i in 1..=g {
        d = d.rolfsen_twist(i, &back)?;
    }
    stages.push(snapshot(&d, format!("{} twists along each l_i", back)));
    let left = BigInt::from(-1);
    for i in 1..=g {
        let mut crossing = vec![BigInt::zero(); g + 1];
        crossing[0] = BigInt::one();
        crossing[i] = BigInt::from(-1);
        d = d.boundary_disc_twist(&crossing, &left)?;
    }
    stages.push(snapshot(&d, "left-hand twist in each meridian disc".into()));
    Ok((d, stages))
}

/// Read Seifert invariants off a keychain diagram.
///
/// A coefficient `a/b` on a fiber `L_i` fills `a·q + b·t`, giving `(a, b)`.
/// On the axis `L` the cross-section meets the boundary torus in `-l` and
/// the fiber in `m`, so `a/b` fills `a·t - b·q`, giving `(-b, a)`. Pairs
/// with `α = 1` fold into `b`.
pub fn seifert_invariants_from_keychain(d: &SurgeryDiagram) -> Result<SeifertInvariants, ExtensionError> {
    let n = d.component_count();
    if n < 2 {
        return Err(ExtensionError::NotKeychain("need an axis and at least one fiber".into()));
    }
    for i in 1..n {
        if !d.linking_number(0, i).is_one() {
            return Err(ExtensionError::NotKeychain(format!("lk(L, component {i}) != 1")));
        }
        for j in i + 1..n {
            if !d.linking_number(i, j).is_zero() {
                return Err(ExtensionError::NotKeychain(format!("fibers {i} and {j} are linked")));
            }
        }
    }
    let mut b = BigInt::zero();
    let mut exceptional = Vec::new();
    let mut push = |alpha: BigInt, beta: BigInt| -> Result<(), ExtensionError> {
        let (alpha, beta) = if alpha.is_negative() { (-alpha, -beta) } else { (alpha, beta) };
        if alpha.is_zero() {
            return Err(ExtensionError::NotKeychain("a filling is parallel to the fiber".into()));
        }
        if alpha.is_one() {
            b += beta;
        } else {
            exceptional.push((alpha, beta));
        }
        Ok(())
    };
    for i in 1..n {
        let c = d.coefficient(i);
        push(c.numerator().clone(), c.denominator().clone())?;
    }
    let c = d.coefficient(0);
    push(-c.denominator().clone(), c.numerator().clone())?;
    SeifertInvariants::new(b, exceptional)
}

/// Everything built for the Seifert-fibered extension of one action.
#[derive(Clone, Debug)]
pub struct SeifertExtension {
    pub n: u64,
    pub presentation: GroupPresentation,
    /// Images of `x_1..x_g` under the induced map `π1(Y) -> G`: the same
    /// tuple as the action, since `π1(W) -> π1(Y)` fixes generators.
    pub induced_images: Vec<Element>,
    pub diagram: SurgeryDiagram,
    pub script: Vec<ScriptStage>,
    pub invariants_unnormalized: SeifertInvariants,
    pub invariants_normalized: SeifertInvariants,
    pub euler_number: BigRational,
    pub h1: AbelianGroupStructure,
    pub cover_genus: i64,
}

/// Check `n` against the action: positive and divisible by the exponent.
pub fn check_twist_order(action: &HandlebodyAction, n: u64) -> Result<(), ExtensionError> {
    if action.quotient_genus() < 2 {
        return Err(ExtensionError::GenusTooSmall(action.quotient_genus()));
    }
    if n == 0 {
        return Err(ExtensionError::NonPositiveTwist);
    }
    let exponent = action.group().exponent();
    if !n.is_multiple_of(exponent) {
        return Err(ExtensionError::NotDivisibleByExponent { n, exponent });
    }
    Ok(())
}

/// `<x_1..x_g | x_i^n (x_1...x_g)^-n>`
pub fn seifert_presentation(g: usize, n: u64) -> Result<GroupPresentation, ExtensionError> {
    if g < 2 {
        return Err(ExtensionError::GenusTooSmall(g));
    }
    Ok(GroupPresentation::new(g, attaching_words(g, n)?)?)
}

pub fn build_seifert_extension(action: &HandlebodyAction, n: u64) -> Result<SeifertExtension, ExtensionError> {
    check_twist_order(action, n)?;
    let g = action.quotient_genus();
    let presentation = seifert_presentation(g, n)?;
    let group = action.group();
    for (index, r) in presentation.relators().iter().enumerate() {
        if r.evaluate(group, action.images())? != group.identity() {
            return Err(ExtensionError::RelatorNotKilled { index });
        }
    }
    let (diagram, script) = scripted_seifert_diagram(g, n)?;
    let invariants_unnormalized = seifert_invariants_from_keychain(&diagram)?;
    let invariants_normalized = normalize_seifert(&invariants_unnormalized)?;
    let h1 = h1_from_presentation(&presentation);
    debug_assert_eq!(h1, h1_from_surgery(&diagram));
    Ok(SeifertExtension {
        n,
        euler_number: invariants_normalized.euler_number(),
        presentation,
        induced_images: action.images().to_vec(),
        diagram,
        script,
        invariants_unnormalized,
        invariants_normalized,
        h1,
        cover_genus: action.total_genus(),
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::catalog::cyclic;
    use crate::group::FiniteGroup;

    fn pairs(v: &[(i64, i64)]) -> Vec<(BigInt, BigInt)> {
        v.iter().map(|&(a, b)| (BigInt::from(a), BigInt::from(b))).collect()
    }

    fn inv(b: i64, v: &[(i64, i64)]) -> SeifertInvariants {
        SeifertInvariants::new(b, pairs(v)).unwrap()
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(
            seifert_invariants_closed_form(3, 4, false).unwrap(),
            inv(0, &[(4, -3), (4, -3), (4, -3), (4, 11)])
        );
        assert_eq!(
            seifert_invariants_closed_form(3, 4, true).unwrap(),
            inv(-1, &[(4, 1), (4, 1), (4, 1), (4, 3)])
        );
        assert_eq!(seifert_invariants_closed_form(2, 2, true).unwrap(), inv(-1, &[(2, 1), (2, 1), (2, 1)]));
        let one = seifert_invariants_closed_form(3, 1, false).unwrap();
        assert!(one.exceptional.is_empty());
        assert_eq!(one.euler_number(), rat(-2, 1));
        assert!(seifert_invariants_closed_form(1, 3, false).is_err());
    }

    #[test]
    fn normalization_examples() {
        let s = inv(-1, &[(4, 1), (4, 3)]);
        assert_eq!(normalize_seifert(&s).unwrap(), s);
        assert_eq!(
            normalize_seifert(&inv(0, &[(4, -3), (4, -3), (4, -3), (4, 11)])).unwrap(),
            inv(-1, &[(4, 1), (4, 1), (4, 1), (4, 3)])
        );
        assert_eq!(normalize_seifert(&inv(0, &[(2, -1)])).unwrap(), inv(-1, &[(2, 1)]));
        assert!(SeifertInvariants::new(0, pairs(&[(4, 2)])).is_err());
        assert!(SeifertInvariants::new(0, pairs(&[(1, 2)])).is_err());
    }

    #[test]
    fn euler_examples() {
        assert_eq!(inv(0, &[]).euler_number(), rat(0, 1));
        assert_eq!(seifert_invariants_closed_form(2, 2, true).unwrap().euler_number(), rat(-1, 2));
        assert_eq!(seifert_invariants_closed_form(2, 2, false).unwrap().euler_number(), rat(-1, 2));
    }

    #[test]
    fn display() {
        assert_eq!(inv(-1, &[(2, 1), (2, 1)]).to_string(), "{-1; (o1, 0); (2, 1); (2, 1)}");
    }

    #[test]
    fn script_matches_keychain() {
        for g in 2..=4 {
            for n in 1..=6 {
                let (d, stages) = scripted_seifert_diagram(g, n).unwrap();
                assert_eq!(d, keychain_diagram(g, n), "g={g} n={n}");
                assert_eq!(stages[0].coefficients[0], format!("1/{n}"));
            }
        }
    }

    #[test]
    fn z2_extension() {
        let z2 = Arc::new(cyclic(2));
        let a = HandlebodyAction::new(z2, 2, vec![Element(1), Element(1)]).unwrap();
        let ext = build_seifert_extension(&a, 2).unwrap();
        let lens: Vec<_> = ext.presentation.relators().iter().map(|r| r.len()).collect();
        assert_eq!(lens, [6, 4]);
        assert_eq!(ext.diagram.coefficient(0).to_string(), "-3/2");
        assert_eq!(ext.diagram.coefficient(1).to_string(), "-2/1");
        assert_eq!(ext.diagram.coefficient(2).to_string(), "-2/1");
        assert_eq!(ext.invariants_normalized, inv(-1, &[(2, 1), (2, 1), (2, 1)]));
        assert_eq!(ext.h1.to_string(), "Z/2 ⊕ Z/2");
        assert_eq!(ext.cover_genus, 3);
    }

    #[test]
    fn trivial_group_n1() {
        let t = Arc::new(FiniteGroup::trivial());
        let a = HandlebodyAction::new(t, 2, vec![Element(0), Element(0)]).unwrap();
        let ext = build_seifert_extension(&a, 1).unwrap();
        assert_eq!(ext.h1.order(), Some(BigInt::one()));
        assert_eq!(ext.invariants_normalized, inv(1, &[]));
    }

    #[test]
    fn divisibility_errors() {
        let z3 = Arc::new(cyclic(3));
        let a = HandlebodyAction::new(Arc::clone(&z3), 2, vec![Element(1), Element(2)]).unwrap();
        assert_eq!(
            build_seifert_extension(&a, 2).unwrap_err(),
            ExtensionError::NotDivisibleByExponent { n: 2, exponent: 3 }
        );
        let b = HandlebodyAction::new(z3, 1, vec![Element(1)]).unwrap();
        assert_eq!(build_seifert_extension(&b, 3).unwrap_err(), ExtensionError::GenusTooSmall(1));
    }
}
