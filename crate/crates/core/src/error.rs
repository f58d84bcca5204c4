use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("mixture has no components")]
    EmptyMixture,

    #[error("mixture weights sum to {sum}, more than 1e-9 away from 1")]
    WeightsNotNormalized { sum: f64 },

    #[error("affine map with zero scale yields a degenerate law")]
    DegenerateAffine,

    #[error("model has infinite variance")]
    InfiniteVariance,

    #[error("truncated mass {mass:.3e} exceeds 1e-6 at the maximum window")]
    TailTooHeavy { mass: f64 },

    #[error("incompatible grids: {0}")]
    IncompatibleGrids(String),

    #[error("reference density vanishes at x = {x} inside the support of f")]
    ZeroReferenceDensity { x: f64 },

    #[error("unknown variable label `{0}`")]
    UnknownLabel(String),

    #[error("degenerate subset {labels}: covariance block is singular (entropy is -inf)")]
    DegenerateSubset { labels: String },

    #[error("covariance is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("covariance is not symmetric (max asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),

    #[error("check `{check}` expects {expected} input models, got {got}")]
    Arity {
        check: String,
        expected: usize,
        got: usize,
    },

    #[error("too few samples: need at least {need}, got {got}")]
    TooFewSamples { need: usize, got: usize },

    #[error("all samples are equal")]
    DegenerateSamples,

    #[error("group order mismatch: {0} vs {1}")]
    GroupMismatch(usize, usize),

    #[error("inconsistent maps: F(x1) != G(x2) at ({x1}, {x2}) with positive mass")]
    InconsistentMaps { x1: usize, x2: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
