use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Argument outside the documented domain of an operation.
    #[error("domain error in {context}: {message}")]
    Domain {
        context: &'static str,
        message: String,
    },

    /// A result would exceed the range of f64.
    #[error("overflow in {context}: argument {value}")]
    Overflow { context: &'static str, value: f64 },

    /// Two objects that must share a grid or transform do not.
    #[error("mismatch: {0}")]
    Mismatch(String),

    /// An iterative solver ran out of iterations.
    #[error(
        "no convergence after {iterations} iterations: last estimate {last_estimate}, residual {residual}"
    )]
    NoConvergence {
        iterations: usize,
        last_estimate: f64,
        residual: f64,
    },

    /// Recovery refused because the composite operator norm is too close to one.
    #[error("recovery refused: ‖E_S F_Σ‖ = {op_norm} is not boundedly below one")]
    NotRecoverable { op_norm: f64 },
}

impl Error {
    pub(crate) fn domain(context: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            context,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
