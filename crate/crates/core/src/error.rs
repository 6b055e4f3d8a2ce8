use thiserror::Error;

/// Errors raised by the numerical operators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma pole at z = {re}{im:+}i")]
    Pole { re: f64, im: f64 },

    #[error("series term overflows: log-magnitude {log_magnitude} at k = {k}")]
    Overflow { k: usize, log_magnitude: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unstable limit: extrapolants drift by {drift:e} against estimated error {estimate:e}")]
    UnstableLimit { drift: f64, estimate: f64 },

    #[error("quadrature did not converge after {subdivisions} subdivisions (error estimate {error:e})")]
    NonConvergence { subdivisions: usize, error: f64 },

    #[error("curve is not closed: endpoint gap {gap:e}")]
    OpenCurve { gap: f64 },

    #[error("value is not real: {re} + {im}i")]
    NonReal { re: f64, im: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Stable name used in reports and by the CLI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Pole { .. } => "PoleError",
            Error::Overflow { .. } => "OverflowError",
            Error::InvalidParameters(_) => "InvalidParameters",
            Error::Domain(_) => "DomainError",
            Error::UnstableLimit { .. } => "UnstableLimit",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::OpenCurve { .. } => "OpenCurve",
            Error::NonReal { .. } => "NonRealValue",
            Error::InvalidConfig(_) => "InvalidConfig",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
