use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An exhaustive enumeration would exceed the configured cap.
    #[error("enumeration of {required} items exceeds cap {cap}")]
    CapExceeded { required: u128, cap: u128 },

    #[error("subspace is not contained in the form's domain")]
    NotContained,

    #[error("matrix is singular mod {0}")]
    Singular(u32),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("reconstruction error {error:.3e} exceeds tolerance")]
    Reconstruction { error: f64 },

    #[error("invalid linear system: {0}")]
    InvalidSystem(String),

    #[error("parse error: {0}")]
    Parse(String),
}
