//! Responsibility scores for ontology-mediated queries.
//!
//! The crate scores the facts of an ABox by how much they contribute to a
//! Boolean query holding under a DL-Lite_R (or small Horn) TBox. Scores are
//! weighted sums of minimal supports (WSMS) or brute-force Shapley values,
//! always exact rationals.
//!
//! Minimal supports are counted three ways that check one another:
//!
//! * [`support::brute`] enumerates subsets of the ABox against an entailment
//!   test;
//! * [`support::partition`] rewrites the query into counting queries whose
//!   homomorphism counts, scaled by automorphism counts, give the number of
//!   minimal supports of each size;
//! * [`interaction_free`] factors interaction-free queries into per-atom
//!   singleton-support counts evaluated over a weighted database.
//!
//! The crate is `no_std` and only needs `alloc`. Parsing, file formats and
//! the command line live in the `respo` crate.

#![no_std]

#[macro_use]
extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod generators;
pub mod homomorphism;
pub mod interaction_free;
pub mod model;
pub mod reasoner;
pub mod rewriter;
pub mod shapley;
pub mod sql;
pub mod support;

pub use error::{Error, Result};
pub use model::*;
