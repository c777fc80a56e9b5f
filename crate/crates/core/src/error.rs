use thiserror::Error;

/// Errors raised by the crystal-forge computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("invalid ring parameters: {0}")]
    InvalidDegree(String),
    #[error("elementary divisor exponent reached the working precision m = {m}")]
    PrecisionExhausted { m: u32 },
    #[error("Newton polygon not certified at precision {m}; rebuild with m >= {required_m}")]
    NewtonPrecisionExceeded { m: u32, required_m: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ring mismatch between operands")]
    RingMismatch,

    #[error("unsupported Lie type {0}")]
    UnsupportedType(String),
    #[error("node {node} out of range for rank {rank}")]
    NodeOutOfRange { node: usize, rank: usize },
    #[error("Weyl group of order {order} exceeds enumeration bound {bound}")]
    EnumerationBoundExceeded { order: u64, bound: u64 },
    #[error("not a diagram automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("node {node} is not minuscule for {lie_type}")]
    IllegalEtaNode { node: usize, lie_type: String },
    #[error("diagram automorphism of order {order} not allowed for {lie_type}")]
    IllegalAutomorphismOrder { order: usize, lie_type: String },
    #[error("all eta entries are zero")]
    EmptyI1,
    #[error("incompatible step structures: {0}")]
    IncompatibleSteps(String),
    #[error("invalid monomial crystal: {0}")]
    InvalidCrystal(String),

    #[error("Verschiebung matrix is missing")]
    MissingVerschiebung,
    #[error("matrix is not monomial: {0}")]
    NotMonomial(String),

    #[error("unknown catalog id {0}")]
    UnknownId(String),
}

pub type Result<T> = std::result::Result<T, Error>;
