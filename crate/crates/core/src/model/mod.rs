//! Domain vocabulary shared by every pipeline: names, terms, roles, axioms,
//! ABoxes, queries, exact rationals and support histograms.

mod abox;
mod axiom;
mod histogram;
mod name;
mod query;
mod rational;
mod weights;

pub use abox::{ABox, Fact, GroundAtom};
pub use axiom::{normalize_role, Axiom, BasicConcept, Role, TBox};
pub use histogram::SupportHistogram;
pub use name::Name;
pub use query::{connected_components, Assignment, Atom, Term, CQ, OMQ, UCQ};
pub use rational::Rational;
pub use weights::{WeightFunction, WeightedDatabase};
