use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation of zero")]
    ValuationOfZero,
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("degenerate map: resultant is zero")]
    DegenerateMap,
    #[error("zero lift")]
    ZeroLift,
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("ultrametric distance needs rational points")]
    NonRationalPoint,
    #[error("depth guard exceeded: {0}")]
    DepthGuard(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("numeric non-convergence: {0}")]
    NonConvergence(String),
}

impl Error {
    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidInput(message.into())
    }

    /// True for failures of numerical procedures rather than of the input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NonConvergence(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
