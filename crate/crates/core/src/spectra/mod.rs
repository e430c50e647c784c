//! The quantale of fully invariant submodules, relative primes, the prime
//! and maximal spectra with their nuclei and fixed-point frames, and the
//! comparisons between points, primitive and maximal submodules.

mod compare;
mod quantale;
mod spaces;

use serde::Serialize;

pub use compare::{mx_sobriety_report, pt_prt_compare, MxSobriety, PtPrtComparison};
pub use quantale::{primes_relative, quantale_of_submodules, FiniteQuantale};
pub use spaces::{max_space, maximal_annihilators, spec_space, SpectrumKind, SpectrumSpace};

/// One verified claim about a concrete module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub claim: &'static str,
    pub holds: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Finding {
    pub fn new(claim: &'static str, holds: bool, detail: impl Into<String>) -> Self {
        Self {
            claim,
            holds,
            detail: detail.into(),
        }
    }
}
