use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid type ({p},{q}): need q >= 2 and 1 <= p <= q(q-1)/2")]
    TypeOutOfRange { p: usize, q: usize },

    #[error("matrix {index} is not skew-symmetric (residual {residual:.3e})")]
    NotSkew { index: usize, residual: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("tuple is linearly dependent (rank {rank} < p = {p}); not of type (p,q)")]
    DependentTuple { rank: usize, p: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("metric matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("zero tuple has no moment map direction")]
    ZeroTuple,

    #[error("flow did not certify a closed orbit; refusing to extract a certificate")]
    InconclusiveFlow,

    #[error("tuple file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
