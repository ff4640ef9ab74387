use thiserror::Error;

/// Errors raised by field, moment and quadrature operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Antisymmetric pair with coincident packets: the spatial state vanishes.
    #[error("degenerate pair: antisymmetric state with r0 = p0 = 0 has zero norm")]
    DegeneratePair,

    #[error("Na series did not converge within {terms} terms")]
    NoConvergence { terms: usize },

    #[error("quadrature failed: estimated relative error {estimated:.3e} exceeds target {target:.3e}")]
    QuadratureFailure { estimated: f64, target: f64 },

    /// An inverse formula was applied outside of its domain; the message
    /// names the violated condition.
    #[error("domain error: {0}")]
    DomainError(String),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
