use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("need at least 2 states, got {0}")]
    TooFewStates(usize),

    #[error("entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: f64 },

    #[error("entries sum to {sum}, expected 1 within {tol}")]
    BadSum { sum: f64, tol: f64 },

    #[error("matrix is not square: {rows} rows of length {cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("state {state} out of range for alphabet of size {k}")]
    StateOutOfRange { state: usize, k: usize },

    #[error("sequence of length {len} too short, need at least {min}")]
    SequenceTooShort { len: usize, min: usize },

    #[error("power iteration did not converge within {max_iters} iterations (reducible or periodic chain)")]
    NoConvergence { max_iters: u64 },

    #[error("stationary distribution is not unique (runs from distinct starts disagree)")]
    NonUniqueStationary,

    #[error("delta {delta} outside [0, 1/{k})")]
    DeltaOutOfRange { delta: f64, k: usize },

    #[error("enumeration budget exceeded: k^n = {size:.3e} > {budget:.3e}")]
    EnumerationBudget { size: f64, budget: f64 },

    #[error("every chain in the prior assigns probability 0 to the sequence")]
    ZeroLikelihood,

    #[error("sequence does not end in a fresh tail run")]
    NotFreshTailRun,

    #[error("rejection sampling failed after {attempts} attempts")]
    RejectionFailed { attempts: u64 },

    #[error("unknown token `{0}`")]
    UnknownToken(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
