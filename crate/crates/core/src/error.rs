use thiserror::Error;

/// Errors raised by the toolkit's operations.
///
/// Divergent quantities (infinite norms, infinite measures) are values, not
/// errors; they are returned as `f64::INFINITY`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid measure space: {0}")]
    InvalidSpace(String),
    #[error("invalid set: {0}")]
    InvalidSet(String),
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("operands live on different measure spaces")]
    SpaceMismatch,
    #[error("integral is undefined (both +inf and -inf parts)")]
    UndefinedIntegral,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),
    #[error("symbol is not a bijection of a finite atomic space")]
    NotBijective,
    #[error("no closed form available: {0}")]
    NotClosedForm(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
