//! Finite lattices, monotone maps and their adjoints, and closure-type
//! self-maps.

mod closure;
mod lattice;
mod maps;
pub mod subsets;

pub use closure::{classify_closure, ClosureFlags, ClosureReport};
pub use lattice::{Bound, FiniteLattice, LatticeClass};
pub use maps::{is_adjunction, MonotoneMap};
