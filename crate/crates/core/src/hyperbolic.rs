//! Surgery diagrams for the hyperbolic extension.
//!
//! Components are `L_1..L_g` at `-1 - 1/(n-1) = -n/(n-1)` and
//! `K_1..K_{g-1}`, the components of the twisted curve `C_0`, at `1/n`. The
//! `L_i` for `i < g` alternate with the `K_j` around a closed chain of
//! length `2g - 2`; `L_g` clasps the chain. The link complement covers the
//! Whitehead link complement with degree `2g - 2`.
//!
//! Only the coefficients, the component count and the chain adjacency are
//! pinned down. Linking numbers along the chain follow the convention
//! `lk = 1` between chain neighbours and `lk = 0` for the clasp; they are
//! not derived, so first homology of these diagrams is not meaningful.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::action::HandlebodyAction;
use crate::seifert::{check_twist_order, ExtensionError, ScriptStage};
use crate::surgery::{Component, RationalCoefficient, SurgeryDiagram};

pub const HYPERBOLICITY_NOTICE: &str = "The link complement is hyperbolic (a cyclic cover of the \
Whitehead link complement), so the surgered manifold is hyperbolic for all but finitely many n. \
Which n are excluded is not computed here.";

#[derive(Clone, Debug, Serialize)]
pub struct HyperbolicDiagram {
    pub g: usize,
    pub n: u64,
    pub diagram: SurgeryDiagram,
    /// Labels around the chain: `L1, K1, L2, K2, ..., L{g-1}, K{g-1}`.
    pub chain_order: Vec<String>,
    pub clasp_component: String,
    pub cover_degree: usize,
    /// Unordered neighbouring pairs around the chain, as component indices.
    pub adjacency: Vec<(usize, usize)>,
    pub script: Vec<ScriptStage>,
    pub notice: &'static str,
}

fn l_index(i: usize) -> usize {
    i - 1
}

fn k_index(g: usize, j: usize) -> usize {
    g + j - 1
}

/// Build the diagram for genus `g` and twist order `n` without an action.
pub fn hyperbolic_diagram(g: usize, n: u64) -> Result<HyperbolicDiagram, ExtensionError> {
    if g < 2 {
        return Err(ExtensionError::GenusTooSmall(g));
    }
    if n == 0 {
        return Err(ExtensionError::NonPositiveTwist);
    }
    if n < 2 {
        return Err(ExtensionError::TwistTooSmall(n));
    }
    let ni = BigInt::from(n);
    let mut comps = Vec::with_capacity(2 * g - 1);
    for i in 1..=g {
        comps.push(Component::new(format!("L{i}"), RationalCoefficient::infinity(), format!("parallel to l{i}")));
    }
    for j in 1..g {
        comps.push(Component::new(format!("K{j}"), RationalCoefficient::infinity(), format!("component {j} of C0")));
    }
    let mut d = SurgeryDiagram::unlinked(comps);
    let total = d.component_count();
    let snapshot = |d: &SurgeryDiagram, step: String| ScriptStage {
        step,
        coefficients: d.components().iter().map(|c| c.coefficient.to_string()).collect(),
    };
    let mut script = Vec::new();

    for j in 1..g {
        d = d.rolfsen_twist(k_index(g, j), &ni)?;
    }
    script.push(snapshot(&d, format!("{n} twists along C")));
    let back: BigInt = 1 - &ni;
    for i in 1..=g {
        d = d.rolfsen_twist(l_index(i), &back)?;
    }
    script.push(snapshot(&d, format!("{back} twists along each l_i")));
    // The meridian disc of handle i meets L_i once and misses every K_j
    // algebraically, so the K_j keep 1/n.
    for i in 1..=g {
        let mut crossing = vec![BigInt::zero(); total];
        crossing[l_index(i)] = BigInt::one();
        d = d.boundary_disc_twist(&crossing, &BigInt::from(-1))?;
    }
    script.push(snapshot(&d, "left-hand twist in each meridian disc".into()));

    let mut chain = Vec::with_capacity(2 * g - 2);
    for i in 1..g {
        chain.push(l_index(i));
        chain.push(k_index(g, i));
    }
    let mut adjacency = Vec::new();
    for w in 0..chain.len() {
        let (a, b) = (chain[w], chain[(w + 1) % chain.len()]);
        let pair = (a.min(b), a.max(b));
        if !adjacency.contains(&pair) {
            adjacency.push(pair);
        }
    }
    for &(a, b) in &adjacency {
        d = d.with_linking(a, b, 1)?;
    }
    let chain_order = chain.iter().map(|&c| d.components()[c].label.clone()).collect();
    Ok(HyperbolicDiagram {
        g,
        n,
        chain_order,
        clasp_component: format!("L{g}"),
        cover_degree: 2 * g - 2,
        adjacency,
        diagram: d,
        script,
        notice: HYPERBOLICITY_NOTICE,
    })
}

pub fn build_hyperbolic_diagram(action: &HandlebodyAction, n: u64) -> Result<HyperbolicDiagram, ExtensionError> {
    check_twist_order(action, n)?;
    hyperbolic_diagram(action.quotient_genus(), n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> RationalCoefficient {
        RationalCoefficient::new(a, b).unwrap()
    }

    #[test]
    fn genus_two() {
        let h = hyperbolic_diagram(2, 4).unwrap();
        assert_eq!(h.diagram.component_count(), 3);
        assert_eq!(h.diagram.coefficient(0), &q(-4, 3));
        assert_eq!(h.diagram.coefficient(1), &q(-4, 3));
        assert_eq!(h.diagram.coefficient(2), &q(1, 4));
        assert_eq!(h.cover_degree, 2);
        assert_eq!(h.chain_order, ["L1", "K1"]);
        assert_eq!(h.adjacency, [(0, 2)]);
    }

    #[test]
    fn genus_three() {
        let h = hyperbolic_diagram(3, 2).unwrap();
        let labels: Vec<_> = h.diagram.components().iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["L1", "L2", "L3", "K1", "K2"]);
        for i in 0..3 {
            assert_eq!(h.diagram.coefficient(i), &q(-2, 1));
        }
        for j in 3..5 {
            assert_eq!(h.diagram.coefficient(j), &q(1, 2));
        }
        assert_eq!(h.chain_order, ["L1", "K1", "L2", "K2"]);
        assert_eq!(h.clasp_component, "L3");
        assert_eq!(h.adjacency.len(), 4);
        for j in 0..5 {
            assert!(h.diagram.linking_number(2, j).is_zero());
        }
    }

    #[test]
    fn rejects_small_inputs() {
        assert_eq!(hyperbolic_diagram(2, 1).unwrap_err(), ExtensionError::TwistTooSmall(1));
        assert_eq!(hyperbolic_diagram(1, 3).unwrap_err(), ExtensionError::GenusTooSmall(1));
    }
}
