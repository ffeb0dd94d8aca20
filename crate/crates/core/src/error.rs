use thiserror::Error;

/// Errors raised by the DOA toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DoaError {
    #[error("invalid array geometry: {0}")]
    Geometry(String),

    #[error("invalid source set: {0}")]
    Sources(String),

    #[error("angle out of range: {name} = {value} (allowed {lo}..={hi} rad)")]
    AngleOutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: String, actual: String },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, DoaError>;
