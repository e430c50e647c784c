//! Finite rings and modules given by tables, their submodule lattices,
//! Hom enumeration, the product `N_M K`, annihilators, prime and semiprime
//! submodules, simple subquotients and module-class predicates.

mod context;
mod hom;
mod module;
mod primes;
mod ring;
mod simples;

pub use context::{Caps, ModuleContext, ProjectivityProbe};
pub use hom::{hom, isomorphic, kernel, HomSet};
pub use module::{FiniteModule, ModuleSpec, Origin, Submodule};
pub use primes::{
    is_prime, is_prime_definition, is_semiprime, is_semiprime_definition, primes, PrimeReport,
    SemiprimeReport,
};
pub use ring::{FiniteRing, RingSpec};
pub use simples::{
    lemma_checks, module_predicates, primitive_submodules, simple_subquotients, simples_exhaustive,
    LemmaResult, ModulePredicates, SimpleClass,
};
