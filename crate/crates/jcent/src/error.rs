use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Field lengths inconsistent with the declared qudit dimension.
    #[error("structural error: {0}")]
    Structure(String),

    #[error("state violates positivity: {0}")]
    InvalidState(String),

    /// An entry forbidden by the excitation-number pattern is too large.
    #[error("superselection violation at ({row},{col}): |entry| = {magnitude}")]
    Superselection {
        row: usize,
        col: usize,
        magnitude: f64,
    },

    #[error("matrix not Hermitian: max asymmetry {0}")]
    NotHermitian(f64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("input vector not normalized: |norm - 1| = {0}")]
    NotNormalized(f64),

    #[error("zero-trace state")]
    ZeroTrace,

    #[error("state is not PPT: {0}")]
    NotPpt(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// The closed-form certification only applies inside its validity regime.
    #[error("outside certification regime: {0}")]
    Regime(String),

    /// Numerically computed kernel disagrees with the analytic span; the run
    /// is flagged instead of emitting a certificate.
    #[error("kernel mismatch: {0}")]
    KernelMismatch(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
