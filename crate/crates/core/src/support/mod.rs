//! Minimal supports: enumeration by subsets, by homomorphism images, and
//! counting through reducts and automorphisms.

pub mod brute;
pub mod images;
pub mod partition;

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{ABox, GroundAtom, SupportHistogram, TBox, UCQ};
use crate::reasoner::{require_consistent, Reasoner};

/// Entailment test for an OMQ restricted to subsets of an ABox.
#[derive(Clone, Debug)]
pub struct OmqOracle<'a> {
    pub reasoner: Reasoner,
    pub abox: &'a ABox,
    pub query: &'a UCQ,
}

impl<'a> OmqOracle<'a> {
    /// Fails when the whole ABox is inconsistent with the TBox.
    pub fn new(tbox: &TBox, abox: &'a ABox, query: &'a UCQ) -> Result<Self> {
        let reasoner = Reasoner::new(tbox)?;
        require_consistent(&reasoner, &abox.atoms())?;
        Ok(OmqOracle {
            reasoner,
            abox,
            query,
        })
    }

    pub fn eval(&self, mask: &[bool]) -> Result<bool> {
        let atoms: Vec<&GroundAtom> = self
            .abox
            .facts()
            .iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|(f, _)| &f.atom)
            .collect();
        self.reasoner.entails_ucq(&atoms, self.query)
    }
}

/// `countFMS(k, D) - countFMS(k, D \ {f})` for every `k`: the minimal
/// supports that contain `f`.
pub fn containing(full: &SupportHistogram, without: &SupportHistogram) -> Result<SupportHistogram> {
    full.checked_sub(without).ok_or_else(|| {
        Error::Invariant(format!(
            "removing a fact added minimal supports: {full} versus {without}"
        ))
    })
}

/// Per-fact histograms of the supports containing each fact, from a
/// histogram provider over sub-databases given as masks.
pub fn per_fact_histograms(
    n: usize,
    mut provider: impl FnMut(&[bool]) -> Result<SupportHistogram>,
) -> Result<(SupportHistogram, Vec<SupportHistogram>)> {
    let mut mask = vec![true; n];
    let full = provider(&mask)?;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        mask[i] = false;
        let without = provider(&mask)?;
        mask[i] = true;
        out.push(containing(&full, &without)?);
    }
    Ok((full, out))
}
