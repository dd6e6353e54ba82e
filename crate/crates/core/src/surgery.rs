//! Framed-link surgery diagrams reduced to their algebraic data: exact
//! rational coefficients and an integer linking matrix.
//!
//! Coefficient `a/b` on a component means `a·m + b·l` bounds a disc in the
//! filling solid torus (`m`, `l` a meridian–longitude pair). `1/0` is the
//! unfilled component.
//!
//! Twist sign convention: twisting `t > 0` times along an unknotted
//! component with coefficient `1/0` gives it coefficient `1/t`. Left-hand
//! twists are `t < 0`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homology::{cokernel, AbelianGroupStructure, IntegerMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurgeryError {
    #[error("0/0 is not a surgery coefficient")]
    ZeroOverZero,
    #[error("component index {index} out of range for {count} components")]
    ComponentOutOfRange { index: usize, count: usize },
    #[error("component {0} is not flagged unknotted; Rolfsen twists need an unknot")]
    NotUnknotted(String),
    #[error("intersection vector has {found} entries, diagram has {expected} components")]
    LengthMismatch { found: usize, expected: usize },
    #[error("invalid diagram: {0}")]
    Invalid(String),
}

/// A reduced fraction `a/b` with `b >= 0`; `1/0` is infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalCoefficient {
    num: BigInt,
    den: BigInt,
}

impl RationalCoefficient {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, SurgeryError> {
        let (mut num, mut den) = (num.into(), den.into());
        if num.is_zero() && den.is_zero() {
            return Err(SurgeryError::ZeroOverZero);
        }
        let g = num.gcd(&den);
        num /= &g;
        den /= &g;
        if den.is_negative() || (den.is_zero() && num.is_negative()) {
            num = -num;
            den = -den;
        }
        Ok(RationalCoefficient { num, den })
    }

    pub fn infinity() -> Self {
        RationalCoefficient { num: BigInt::one(), den: BigInt::zero() }
    }

    pub fn integer(k: impl Into<BigInt>) -> Self {
        RationalCoefficient { num: k.into(), den: BigInt::one() }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        (!self.is_infinite()).then(|| BigRational::new(self.num.clone(), self.den.clone()))
    }

    /// `a/b + k`
    pub fn add_integer(&self, k: &BigInt) -> Self {
        Self::new(&self.num + k * &self.den, self.den.clone()).expect("nonzero denominator or numerator")
    }

    /// `a/b -> a/(b + t a)`, the twisted component's own coefficient.
    fn twist_self(&self, t: &BigInt) -> Self {
        Self::new(self.num.clone(), &self.den + t * &self.num).expect("gcd(a, b + ta) = gcd(a, b)")
    }
}

impl fmt::Display for RationalCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("∞")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Serialize for RationalCoefficient {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        crate::bigint_serde::pair::serialize(&(self.num.clone(), self.den.clone()), s)
    }
}

impl<'de> Deserialize<'de> for RationalCoefficient {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (a, b) = crate::bigint_serde::pair::deserialize(d)?;
        RationalCoefficient::new(a, b).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub label: String,
    #[serde(rename = "coeff")]
    pub coefficient: RationalCoefficient,
    /// Asserted by the caller; not verified.
    pub unknotted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotation: Option<String>,
}

impl Component {
    pub fn new(label: impl Into<String>, coefficient: RationalCoefficient, annotation: impl Into<String>) -> Self {
        Component { label: label.into(), coefficient, unknotted: true, annotation: Some(annotation.into()) }
    }
}

/// A framed link given by coefficients and a symmetric linking matrix with
/// zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDiagram")]
pub struct SurgeryDiagram {
    components: Vec<Component>,
    #[serde(with = "crate::bigint_serde::matrix")]
    linking: Vec<Vec<BigInt>>,
}

#[derive(Deserialize)]
struct RawDiagram {
    components: Vec<Component>,
    #[serde(with = "crate::bigint_serde::matrix")]
    linking: Vec<Vec<BigInt>>,
}

impl TryFrom<RawDiagram> for SurgeryDiagram {
    type Error = SurgeryError;
    fn try_from(raw: RawDiagram) -> Result<Self, SurgeryError> {
        SurgeryDiagram::new(raw.components, raw.linking)
    }
}

/// Outcome of [`validate_diagram`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramReport {
    pub valid: bool,
    pub violations: Vec<String>,
    pub component_count: usize,
    pub coefficients: Vec<String>,
    /// Determinant of the first-homology relation matrix, when well-formed.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "serialize_opt_big")]
    pub determinant: Option<BigInt>,
}

fn serialize_opt_big<S: serde::Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    crate::bigint_serde::serialize(x.as_ref().expect("skipped when None"), s)
}

/// Check the invariants of raw diagram data without constructing it.
pub fn validate_diagram(components: &[Component], linking: &[Vec<BigInt>]) -> DiagramReport {
    let n = components.len();
    let mut violations = Vec::new();
    if linking.len() != n {
        violations.push(format!("linking matrix has {} rows, expected {n}", linking.len()));
    }
    for (i, row) in linking.iter().enumerate() {
        if row.len() != n {
            violations.push(format!("linking row {i} has {} entries, expected {n}", row.len()));
        }
    }
    let square = violations.is_empty();
    if square {
        for i in 0..n {
            if !linking[i][i].is_zero() {
                violations.push(format!("linking diagonal entry {i} is {}, expected 0", linking[i][i]));
            }
            for j in i + 1..n {
                if linking[i][j] != linking[j][i] {
                    violations.push(format!(
                        "linking is not symmetric at ({i}, {j}): {} vs {}",
                        linking[i][j], linking[j][i]
                    ));
                }
            }
        }
    }
    let determinant = square.then(|| relation_matrix(components, linking).determinant());
    DiagramReport {
        valid: violations.is_empty(),
        violations,
        component_count: n,
        coefficients: components.iter().map(|c| c.coefficient.to_string()).collect(),
        determinant,
    }
}

/// Row `i`: `a_i μ_i + b_i Σ_j lk(i, j) μ_j = 0`.
fn relation_matrix(components: &[Component], linking: &[Vec<BigInt>]) -> IntegerMatrix {
    let n = components.len();
    IntegerMatrix::from_fn(n, n, |i, j| {
        let c = &components[i].coefficient;
        if i == j {
            c.num.clone()
        } else {
            &c.den * &linking[i][j]
        }
    })
}

impl SurgeryDiagram {
    pub fn new(components: Vec<Component>, linking: Vec<Vec<BigInt>>) -> Result<Self, SurgeryError> {
        let report = validate_diagram(&components, &linking);
        if !report.valid {
            return Err(SurgeryError::Invalid(report.violations.join("; ")));
        }
        Ok(SurgeryDiagram { components, linking })
    }

    /// Components with no linking at all.
    pub fn unlinked(components: Vec<Component>) -> Self {
        let n = components.len();
        SurgeryDiagram { components, linking: vec![vec![BigInt::zero(); n]; n] }
    }

    pub fn empty() -> Self {
        SurgeryDiagram::unlinked(Vec::new())
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn coefficient(&self, i: usize) -> &RationalCoefficient {
        &self.components[i].coefficient
    }

    pub fn linking(&self) -> &[Vec<BigInt>] {
        &self.linking
    }

    pub fn linking_number(&self, i: usize, j: usize) -> &BigInt {
        &self.linking[i][j]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.components.iter().position(|c| c.label == label)
    }

    /// Set `lk(i, j) = lk(j, i) = value` for `i != j`.
    pub fn with_linking(mut self, i: usize, j: usize, value: impl Into<BigInt>) -> Result<Self, SurgeryError> {
        let count = self.components.len();
        for index in [i, j] {
            if index >= count {
                return Err(SurgeryError::ComponentOutOfRange { index, count });
            }
        }
        if i == j {
            return Err(SurgeryError::Invalid("a component has no linking number with itself".into()));
        }
        let v = value.into();
        self.linking[i][j] = v.clone();
        self.linking[j][i] = v;
        Ok(self)
    }

    pub fn validate(&self) -> DiagramReport {
        validate_diagram(&self.components, &self.linking)
    }

    pub fn relation_matrix(&self) -> IntegerMatrix {
        relation_matrix(&self.components, &self.linking)
    }

    /// Rolfsen twist `t` times along unknotted component `u`.
    ///
    /// `u: a/b -> a/(b + t a)`; every other `k`: `r_k -> r_k + t lk(k,u)^2`;
    /// `lk(i,j) -> lk(i,j) + t lk(i,u) lk(j,u)` for `i, j != u`.
    pub fn rolfsen_twist(&self, u: usize, t: &BigInt) -> Result<Self, SurgeryError> {
        let count = self.components.len();
        if u >= count {
            return Err(SurgeryError::ComponentOutOfRange { index: u, count });
        }
        if !self.components[u].unknotted {
            return Err(SurgeryError::NotUnknotted(self.components[u].label.clone()));
        }
        let crossing: Vec<BigInt> = self.linking[u].clone();
        let mut out = self.twist_by(&crossing, t, Some(u));
        out.components[u].coefficient = self.components[u].coefficient.twist_self(t);
        Ok(out)
    }

    /// Twist `t` times in a disc whose algebraic intersection with component
    /// `k` is `crossing[k]`. No component is consumed, so only the other
    /// coefficients and the linking matrix change.
    pub fn boundary_disc_twist(&self, crossing: &[BigInt], t: &BigInt) -> Result<Self, SurgeryError> {
        if crossing.len() != self.components.len() {
            return Err(SurgeryError::LengthMismatch { found: crossing.len(), expected: self.components.len() });
        }
        Ok(self.twist_by(crossing, t, None))
    }

    fn twist_by(&self, crossing: &[BigInt], t: &BigInt, skip: Option<usize>) -> Self {
        let mut out = self.clone();
        let n = self.components.len();
        for k in (0..n).filter(|&k| Some(k) != skip) {
            let shift = t * &crossing[k] * &crossing[k];
            if !shift.is_zero() {
                out.components[k].coefficient = self.components[k].coefficient.add_integer(&shift);
            }
        }
        for i in (0..n).filter(|&i| Some(i) != skip) {
            for j in (0..n).filter(|&j| j != i && Some(j) != skip) {
                out.linking[i][j] = &self.linking[i][j] + t * &crossing[i] * &crossing[j];
            }
        }
        out
    }
}

/// First homology of the surgered manifold.
pub fn h1_from_surgery(d: &SurgeryDiagram) -> AbelianGroupStructure {
    cokernel(&d.relation_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> RationalCoefficient {
        RationalCoefficient::new(a, b).unwrap()
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn single(c: RationalCoefficient) -> SurgeryDiagram {
        SurgeryDiagram::unlinked(vec![Component::new("U", c, "")])
    }

    #[test]
    fn coefficient_normal_form() {
        assert_eq!(q(2, -4), q(-1, 2));
        assert_eq!(q(-3, 0), RationalCoefficient::infinity());
        assert_eq!(q(0, -5), q(0, 1));
        assert_eq!(RationalCoefficient::new(0, 0).unwrap_err(), SurgeryError::ZeroOverZero);
        assert_eq!(q(-3, 2).to_string(), "-3/2");
        assert_eq!(RationalCoefficient::infinity().to_string(), "∞");
        assert_eq!(serde_json::to_string(&RationalCoefficient::infinity()).unwrap(), "[1,0]");
    }

    #[test]
    fn twist_on_infinity() {
        for n in 1..8 {
            let d = single(RationalCoefficient::infinity()).rolfsen_twist(0, &big(n)).unwrap();
            assert_eq!(d.coefficient(0), &q(1, n));
            let d = single(RationalCoefficient::infinity()).rolfsen_twist(0, &big(-(n - 1))).unwrap();
            assert_eq!(d.coefficient(0), &q(-1, n - 1));
        }
    }

    #[test]
    fn twist_leaves_unlinked_components() {
        let d = SurgeryDiagram::unlinked(vec![
            Component::new("U", RationalCoefficient::infinity(), ""),
            Component::new("K", q(5, 3), ""),
        ]);
        let e = d.rolfsen_twist(0, &big(4)).unwrap();
        assert_eq!(e.coefficient(1), &q(5, 3));
    }

    #[test]
    fn twist_changes_linked_components() {
        let d = SurgeryDiagram::unlinked(vec![
            Component::new("U", q(1, 0), ""),
            Component::new("A", q(1, 1), ""),
            Component::new("B", q(0, 1), ""),
        ])
        .with_linking(0, 1, 2)
        .unwrap()
        .with_linking(0, 2, -1)
        .unwrap();
        let e = d.rolfsen_twist(0, &big(3)).unwrap();
        assert_eq!(e.coefficient(0), &q(1, 3));
        assert_eq!(e.coefficient(1), &q(13, 1));
        assert_eq!(e.coefficient(2), &q(3, 1));
        assert_eq!(e.linking_number(1, 2), &big(-6));
        assert_eq!(e.linking_number(0, 1), &big(2));
        assert_eq!(e.rolfsen_twist(0, &big(-3)).unwrap(), d);
    }

    #[test]
    fn twist_errors() {
        let mut c = Component::new("K", q(1, 1), "");
        c.unknotted = false;
        let d = SurgeryDiagram::unlinked(vec![c]);
        assert!(matches!(d.rolfsen_twist(0, &big(1)), Err(SurgeryError::NotUnknotted(_))));
        assert!(matches!(d.rolfsen_twist(3, &big(1)), Err(SurgeryError::ComponentOutOfRange { .. })));
        assert!(matches!(
            d.boundary_disc_twist(&[big(1), big(0)], &big(1)),
            Err(SurgeryError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn disc_twist_examples() {
        for n in 2..7 {
            let d = single(q(-1, n - 1)).boundary_disc_twist(&[big(1)], &big(-1)).unwrap();
            assert_eq!(d.coefficient(0), &q(-n, n - 1));
            let mut d = single(q(1, n));
            for g in 1..5 {
                d = d.boundary_disc_twist(&[big(1)], &big(-1)).unwrap();
                assert_eq!(d.coefficient(0), &q(1 - g * n, n));
            }
            let d = single(q(7, n)).boundary_disc_twist(&[big(0)], &big(-1)).unwrap();
            assert_eq!(d.coefficient(0), &q(7, n));
        }
    }

    #[test]
    fn validation() {
        let r = SurgeryDiagram::empty().validate();
        assert!(r.valid);
        assert_eq!(r.determinant, Some(big(1)));
        let comps = vec![Component::new("A", q(1, 1), ""), Component::new("B", q(1, 1), "")];
        let r = validate_diagram(&comps, &[vec![big(0), big(1)], vec![big(2), big(0)]]);
        assert!(!r.valid);
        assert!(r.violations[0].contains("not symmetric"));
        let r = validate_diagram(&comps, &[vec![big(0)]]);
        assert!(!r.valid);
        assert_eq!(r.determinant, None);
        assert!(SurgeryDiagram::new(comps, vec![vec![big(1), big(0)], vec![big(0), big(0)]]).is_err());
    }

    #[test]
    fn homology_examples() {
        let h = h1_from_surgery(&single(q(5, 1)));
        assert_eq!(h.invariant_factors, vec![big(5)]);
        assert!(h1_from_surgery(&SurgeryDiagram::empty()).is_trivial());
        // 0-framed unknot: S^2 x S^1
        assert_eq!(h1_from_surgery(&single(q(0, 1))).free_rank, 1);
        // unfilled component contributes nothing
        assert!(h1_from_surgery(&single(RationalCoefficient::infinity())).is_trivial());
    }

    #[test]
    fn json_round_trip() {
        let d = SurgeryDiagram::unlinked(vec![
            Component::new("L", q(-3, 2), "parallel to C"),
            Component::new("L1", q(-2, 1), "parallel to l1"),
        ])
        .with_linking(0, 1, 1)
        .unwrap();
        let text = serde_json::to_string(&d).unwrap();
        assert!(text.starts_with(r#"{"components":[{"label":"L","coeff":[-3,2],"unknotted":true"#));
        let back: SurgeryDiagram = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
        let bad = r#"{"components":[{"label":"A","coeff":[1,1],"unknotted":true}],"linking":[[1]]}"#;
        assert!(serde_json::from_str::<SurgeryDiagram>(bad).is_err());
    }
}
