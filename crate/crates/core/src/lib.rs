//! Finite-instance computation of the frames and spaces attached to a
//! module: idioms and quantales of submodules, nuclei, the prime and
//! maximal spectra, the frames of semiprime and semiprimitive submodules,
//! the annihilator frame Ψ(M) and the regular core.

pub mod dot;
pub mod error;
pub mod finmod;
pub mod instance;
pub mod order;
pub mod psi;
pub mod report;
mod parallel;
pub mod spectra;
pub mod suite;
pub mod topology;

pub use error::{Error, Result};
