use thiserror::Error;

/// Errors raised by the arithmetic and invariant pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input violates a mathematical precondition (zero divisor, non-monic, bad index...).
    #[error("domain error: {0}")]
    Domain(String),
    /// The available precision window cannot determine the requested quantity.
    #[error("precision error: {0}")]
    Precision(String),
    /// The operation is not supported for this input (for instance square roots in characteristic 2).
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Two independent computations that must agree did not.
    #[error("consistency failure: {0}")]
    Consistency(String),
    /// A cost guard was tripped.
    #[error("resource limit: {0}")]
    Resource(String),
    /// Text could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
macro_rules! precision {
    ($($arg:tt)*) => { $crate::error::Error::Precision(format!($($arg)*)) };
}
macro_rules! consistency {
    ($($arg:tt)*) => { $crate::error::Error::Consistency(format!($($arg)*)) };
}
pub(crate) use {consistency, domain, precision};
