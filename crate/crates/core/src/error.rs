use thiserror::Error;

/// Errors raised by the constructions in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relation is not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("poset is not a lattice: elements {0} and {1} have no {2}")]
    NotALattice(usize, usize, &'static str),
    #[error("map is not monotone: {0} <= {1} but images are not ordered")]
    NotMonotone(usize, usize),
    #[error("map does not preserve joins: {0}")]
    NotJoinPreserving(String),
    #[error("lattice is not a frame")]
    NotAFrame,
    #[error("quantic/multiplicative flags need a product table")]
    ProductRequired,
    #[error("invalid open-set family: {0}")]
    InvalidTopology(String),
    #[error("invalid tables: {0}")]
    InvalidTables(String),
    #[error("incompatible moduli: {0}")]
    IncompatibleModuli(String),
    #[error("size cap exceeded: {what} needs {needed}, cap is {cap}")]
    SizeCapExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },
    #[error("modules are over different rings")]
    RingMismatch,
    #[error("submodule is not fully invariant")]
    NotFullyInvariant,
    #[error("submodule is not proper")]
    NotProper,
    #[error("product is not associative on ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("not a subquasi-quantale: {0}")]
    NotSubQuasiQuantale(String),
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
    #[error("instance parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn violated(msg: impl Into<String>) -> Error {
    Error::InvariantViolated(msg.into())
}
