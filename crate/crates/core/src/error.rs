use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The requested point lies outside the domain of the map or function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A truncated series could not reach the requested tolerance.
    #[error("series budget exhausted after {terms} terms (tail bound {achieved:e} > tol {tol:e})")]
    BudgetExhausted { terms: usize, achieved: f64, tol: f64 },

    #[error("quadrature did not converge: estimated error {achieved:e} > tol {tol:e}")]
    QuadratureFailed { achieved: f64, tol: f64 },

    /// The configuration is not covered by the decomposition theorems.
    #[error("outside theorem: {0}")]
    OutsideTheorem(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
