//! Crate-wide error type.

/// Errors surfaced by estimation, bootstrap, tuning and harness entry points.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Pseudo-observations require strictly distinct values per axis.
    #[error("tied {axis} values ({value}) at sample indices {first} and {second}; ranks are undefined under ties")]
    TiesDetected {
        axis: &'static str,
        value: f64,
        first: usize,
        second: usize,
    },

    #[error("multiplier weights must be strictly positive and finite (weight {index} = {value})")]
    InvalidMultiplier { index: usize, value: f64 },

    #[error("argument out of range: {0}")]
    ArgumentOutOfRange(String),

    #[error("infeasible exponents: {0}")]
    InfeasibleExponents(String),

    #[error("no tail oracle for model {0}")]
    OracleUnavailable(String),

    #[error("numerical tail limit did not stabilize: {0}")]
    LimitDiverged(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable category slug for structured diagnostics (CLI stderr, FFI).
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::TiesDetected { .. } => "ties",
            Error::InvalidMultiplier { .. } => "invalid-multiplier",
            Error::ArgumentOutOfRange(_) => "out-of-range",
            Error::InfeasibleExponents(_) => "infeasible-exponents",
            Error::OracleUnavailable(_) => "oracle-unavailable",
            Error::LimitDiverged(_) => "limit-diverged",
            Error::Config(_) => "config",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
