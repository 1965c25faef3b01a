use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum HtkError {
    #[error("gamma function pole at non-positive integer {0}")]
    Pole(f64),
    #[error("overflow: gamma({0}) exceeds double range")]
    Overflow(f64),
    #[error("parameter pole: {0}")]
    ParameterPole(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("quadrature did not converge: value {value:e}, error estimate {error:e}")]
    NonConvergence { value: f64, error: f64 },
    #[error("evaluation at the pole (identity element)")]
    PoleAtIdentity,
    #[error("method domain: {0}")]
    MethodDomain(String),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("extrapolation did not converge: {0}")]
    Extrapolation(String),
}

pub type Result<T> = std::result::Result<T, HtkError>;

pub(crate) fn invalid(msg: impl Into<String>) -> HtkError {
    HtkError::InvalidArgument(msg.into())
}
