//! Free actions of finite groups on handlebodies and their extensions to
//! closed 3-manifolds, computed algebraically.
//!
//! An action is a surjection from the free group of the quotient handlebody
//! onto the group. From it this crate builds:
//!
//! - equivalence decisions and classifications by Nielsen orbits ([`action`]);
//! - the Seifert-fibered extension: presentation, surgery diagram, Seifert
//!   invariants ([`seifert`]);
//! - surgery diagrams for the hyperbolic extension ([`hyperbolic`]);
//! - presentations and first homology of the covering manifold ([`cover`]).

pub mod action;
pub(crate) mod bigint_serde;
pub mod catalog;
pub mod cover;
pub mod format;
pub mod group;
pub mod homology;
pub mod hyperbolic;
pub mod seifert;
pub mod selftest;
pub mod surgery;
pub mod word;

pub use action::{actions_equivalent, classify_actions, ClassifyOptions, EquivalenceWitness, HandlebodyAction};
pub use cover::{build_coset_table, cover_h1, reidemeister_schreier, CosetTable, CoverPresentation};
pub use group::{load_group, Element, FiniteGroup, GroupSource};
pub use homology::{
    h1_from_presentation, smith_normal_form, AbelianGroupStructure, GroupPresentation, IntegerMatrix,
};
pub use hyperbolic::{build_hyperbolic_diagram, HyperbolicDiagram};
pub use seifert::{
    build_seifert_extension, euler_number, normalize_seifert, seifert_invariants_closed_form, SeifertExtension,
    SeifertInvariants,
};
pub use surgery::{h1_from_surgery, validate_diagram, RationalCoefficient, SurgeryDiagram};
pub use word::{attaching_words, evaluate_word, FreeWord, NielsenMove};
