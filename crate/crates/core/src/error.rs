use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("field contains a non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("frame mismatch: expected {expected} frame")]
    FrameMismatch { expected: &'static str },

    #[error("recenter undefined for zero total vorticity (alpha = {alpha:e})")]
    ZeroCirculation { alpha: f64 },

    #[error("grid of {n} points exceeds the direct-quadrature cap of {cap}")]
    OracleCap { n: usize, cap: usize },

    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("quantity must be strictly positive on the fit window (found {value:e} at tau = {tau})")]
    NonPositive { tau: f64, value: f64 },

    #[error("entropy functional undefined: {0}")]
    InvalidEntropy(String),

    #[error("non-finite value encountered at step {step}")]
    Blowup { step: usize },

    #[error("radial grid inadequate: {0}")]
    GridInadequate(String),

    #[error("eigensolver failed (condition estimate {condition:e}): {reason}")]
    EigenFailure { reason: String, condition: f64 },

    #[error("bad field dump: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
