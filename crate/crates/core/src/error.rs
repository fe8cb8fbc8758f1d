use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("caustic: sin t = {sin_t:e} is too close to zero")]
    Caustic { sin_t: f64 },
    #[error("truncation: {0}")]
    Truncation(String),
    #[error("quadrature did not reach tolerance {tol:e} (last change {last_change:e})")]
    QuadratureFailure { tol: f64, last_change: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn ensure_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite, got {x}")))
    }
}
