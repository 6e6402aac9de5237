use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the domain of the requested quantity.
    #[error("{0}")]
    Domain(String),
    /// A value that should be returned as a plain `f64` does not fit.
    #[error("value not representable as f64: {0}")]
    OutOfRange(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 1.0 {
        Ok(())
    } else {
        Err(domain("alpha must exceed 1"))
    }
}
