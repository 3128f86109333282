//! Error type shared across the library.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("division by zero or non-invertible element")]
    NotInvertible,

    #[error("multiquadratic field would need {0} generators (cap is 2)")]
    TooManyGenerators(usize),

    #[error("incompatible finite field moduli {0} and {1}")]
    ModulusMismatch(u64, u64),

    #[error("singular family parameters: {0}")]
    SingularParameters(String),

    #[error("unknown reference lattice: {0}")]
    UnknownLattice(String),

    #[error("group of order {order} exceeds the cap {cap}")]
    GroupTooLarge { order: u64, cap: u64 },

    #[error("bound {bound} exceeds the cap {cap}")]
    BoundExceeded { bound: u64, cap: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}
