use thiserror::Error;

/// Errors surfaced by the library. Parameter records reject invalid
/// values at construction, so most numerical paths are infallible once
/// the inputs exist.
#[derive(Debug, Error)]
pub enum Error {
    /// An input carried a NaN or infinity.
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    /// A precondition on an argument was violated. The message names
    /// the offending quantity and the bound.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested quantity is undefined in this parameter regime.
    #[error("domain error: {0}")]
    Domain(String),

    /// Lifetime extraction could not produce a fit.
    #[error("lifetime fit failed: {0}")]
    FitFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
