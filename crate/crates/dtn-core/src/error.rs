use thiserror::Error;

/// Errors produced by the circulant, network, continued-fraction, and
/// continuum operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size {n} is below the minimum {min}")]
    InvalidSize { n: usize, min: usize },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("not positive semidefinite: eigenvalue {value:e} at mode {mode} lies below -{tol:e}")]
    NotPositiveSemidefinite { mode: usize, value: f64, tol: f64 },

    #[error("continued fraction hit a pole at floor {floor}")]
    PoleEncountered { floor: usize },

    #[error("fixed-point iteration did not converge in {iterations} iterations; last residual {residual:e}")]
    Nonconvergence { iterations: usize, residual: f64 },

    #[error("degenerate continued fraction: coefficient {index} is zero")]
    DegenerateFraction { index: usize },

    #[error("coefficient recovery: interpolation system is singular at pivot column {pivot}")]
    RecoverySingular { pivot: usize },

    #[error("continued fraction expansion failed at floor {floor}: {reason}")]
    ExpansionFailure { floor: usize, reason: String },

    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),

    #[error("Schur elimination hit a singular diagonal symbol at mode {mode}")]
    EliminationSingularity { mode: usize },

    #[error("mode index {m} out of range for size {n}")]
    ModeOutOfRange { m: usize, n: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
