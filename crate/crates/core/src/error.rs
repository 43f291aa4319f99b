use thiserror::Error;

/// Errors raised by the simulator and the harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero symbol: mode (k={k}, xi={xi}) has alpha = 0")]
    ZeroSymbol { k: i64, xi: f64 },

    #[error("operation `{op}` requires a nonzero x-wavenumber, got k = 0")]
    ZeroModeRejected { op: &'static str },

    #[error("operation `{op}` requires the k = 0 line, got k = {k}")]
    NonzeroModeRejected { op: &'static str, k: i64 },

    #[error("operation `{op}` requires xi != 0")]
    ZeroXi { op: &'static str },

    #[error("species mismatch in `{op}`: {detail}")]
    SpeciesMismatch { op: &'static str, detail: String },

    #[error("non-finite value in {what}")]
    NonFinite { what: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("regime `{regime}` violated: {}", violations.join("; "))]
    Regime {
        regime: String,
        violations: Vec<String>,
    },

    #[error("integration failed for mode (k={k}, xi={xi}) at t={t}: {reason}")]
    Integration {
        k: i64,
        xi: f64,
        t: f64,
        reason: String,
    },

    #[error("too few samples for quadrature: have {have}, need at least {need}")]
    TooFewSamples { have: usize, need: usize },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("weighted variables variant mismatch: expected {expected}")]
    VariantMismatch { expected: &'static str },

    #[error("fit rejected: {0}")]
    Fit(String),

    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("config error: {0}")]
    ConfigValue(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
