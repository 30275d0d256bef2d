use thiserror::Error;

/// Errors produced by problem construction and spectral computations.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("matrix or data contains non-finite entries")]
    NonFiniteInput,

    #[error("empty problem: m = {m}, n = {n}")]
    EmptyProblem { m: usize, n: usize },

    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("singular value decomposition did not converge")]
    DecompositionFailed,

    #[error("regularization parameter must be positive, got {alpha}")]
    NonPositiveAlpha { alpha: f64 },

    #[error("exact data (u_*, f_*) required but not available")]
    MissingExactData,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid rule configuration: {0}")]
    InvalidRule(String),

    #[error("interval [{lo}, {hi}] does not intersect the parameter grid")]
    EmptyWindow { lo: f64, hi: f64 },

    #[error("no candidate parameters to select from")]
    EmptyCandidates,

    #[error("unknown test problem name: {0}")]
    UnknownProblem(String),

    #[error("invalid test problem spec: {0}")]
    InvalidSpec(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed matrix container: {0}")]
    MalformedContainer(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
