use thiserror::Error;

/// Errors surfaced by the catalogs, solvers, and suite runner.
#[derive(Debug, Error)]
pub enum ProxError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),

    #[error("point outside domain of {geometry}: {detail}")]
    DomainError { geometry: String, detail: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no interior-feasible starting point found: {0}")]
    InfeasibleStart(String),

    #[error("vectors do not span the space: not a frame")]
    NotAFrame,

    #[error("unsupported cone kind: {0}")]
    UnsupportedCone(String),

    #[error("no conjugate in catalog for {0}")]
    NoConjugate(String),

    #[error("invalid value: {0}")]
    Invalid(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, ProxError>;
