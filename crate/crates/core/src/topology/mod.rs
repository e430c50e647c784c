//! Finite spaces, the frame of opens, point spaces of frames, sobriety and
//! soberification.

mod frame;
mod sober;
mod space;

pub use frame::{is_spatial, open_set_lattice, pt_space, SpaceFrameBridge, Spatiality};
pub use sober::{
    closed_irreducibles, is_sober, soberification, GenericPointDefect, Soberification,
    SobrietyReport,
};
pub use space::{set_from, set_key, FiniteSpace, Separation};
