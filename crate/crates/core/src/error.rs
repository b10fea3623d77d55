use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A point or parameter lies outside the region where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// An evaluation produced a non-finite value.
    #[error("numeric error: {what}{}", .at.map(|(a, b)| format!(" at ({a}, {b})")).unwrap_or_default())]
    Numeric {
        what: String,
        at: Option<(Complex64, Complex64)>,
    },

    /// Inconsistent arguments, for example jets about different centers.
    #[error("usage error: {0}")]
    Usage(String),

    /// A derivative beyond the stored jet order was requested.
    #[error("truncation error: order {requested} requested, jet holds order {available}")]
    Truncation { requested: usize, available: usize },

    /// A convergence loop stopped before reaching its tolerance.
    #[error("accuracy error: best value {best} with error estimate {err:e} > tolerance {tol:e}")]
    Accuracy { best: Complex64, err: f64, tol: f64 },

    /// An integer result does not fit the supported range.
    #[error("range error: {0}")]
    Range(String),

    /// Division by zero in a rational expression.
    #[error("pole: {0}")]
    Pole(String),

    /// Two routes that must agree did not.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn numeric(what: impl Into<String>) -> Self {
        Error::Numeric {
            what: what.into(),
            at: None,
        }
    }
}
