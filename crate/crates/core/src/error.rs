use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("step parameter gamma must be positive and finite, got {0}")]
    NonPositiveGamma(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("basis vectors are linearly dependent (vector {index} lies in the span of the previous ones)")]
    RankDeficientBasis { index: usize },

    #[error("Lambert W (principal branch) is only supported for z >= 0, got {0}")]
    LambertDomain(f64),

    #[error("Lambert W iteration did not converge for argument {0}")]
    LambertConvergence(f64),

    #[error("point #{index} is not in the graph of {operator}")]
    NotInGraph { operator: String, index: usize },

    #[error("{function} has no single-valued gradient at the requested point")]
    MissingGradient { function: String },

    #[error("iteration diverged: {0}")]
    Divergence(String),

    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
