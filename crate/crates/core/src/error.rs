use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument sits on a pole of a meromorphic function.
    #[error("pole at {0}")]
    Pole(f64),
    /// Argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Series, continued fraction or iteration hit its cap.
    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },
    /// Exact mode was asked for a value that is not representable as a rational.
    #[error("not exactly representable: {0}")]
    Inexact(String),
    /// Backward Charlier step with x numerically zero; use direct evaluation instead.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// Two traces were compared on different node grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    /// No sign change where a zero was expected.
    #[error("no zero found in [{lo}, {hi}]")]
    NotFound { lo: f64, hi: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of an iterative method as opposed to bad input.
    pub fn is_convergence_failure(&self) -> bool {
        matches!(self, Error::NoConvergence { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
