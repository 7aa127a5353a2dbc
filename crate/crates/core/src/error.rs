use thiserror::Error;

/// Errors raised across the clock laboratory.
///
/// Every variant has a stable kebab-case name (see [`ClockError::name`]) which
/// the command-line front end prints so scripts can match on it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClockError {
    #[error("invalid constants: {0}")]
    InvalidConstants(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("incompatible states: {0}")]
    IncompatibleState(String),

    #[error("unsupported spectrum: {0}")]
    UnsupportedSpectrum(String),

    #[error("degenerate clock: {0}")]
    DegenerateClock(String),

    #[error("schwarzschild violation: l_C/2 = {half_diameter:e} m does not exceed 2Gm_rest/c^2 = {radius:e} m")]
    SchwarzschildViolation { half_diameter: f64, radius: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("no estimate: {0}")]
    NoEstimate(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl ClockError {
    pub fn name(&self) -> &'static str {
        match self {
            ClockError::InvalidConstants(_) => "invalid-constants",
            ClockError::InvalidArgument(_) => "invalid-argument",
            ClockError::Capacity(_) => "capacity",
            ClockError::IncompatibleState(_) => "incompatible-state",
            ClockError::UnsupportedSpectrum(_) => "unsupported-spectrum",
            ClockError::DegenerateClock(_) => "degenerate-clock",
            ClockError::SchwarzschildViolation { .. } => "schwarzschild-violation",
            ClockError::InvalidDistribution(_) => "invalid-distribution",
            ClockError::NoEstimate(_) => "no-estimate",
            ClockError::Parse(_) => "parse-error",
            ClockError::Io(_) => "io-error",
        }
    }
}

impl From<std::io::Error> for ClockError {
    fn from(e: std::io::Error) -> Self {
        ClockError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, ClockError>;

pub(crate) fn invalid(msg: impl Into<String>) -> ClockError {
    ClockError::InvalidArgument(msg.into())
}
