use thiserror::Error;

/// Errors produced by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A point or parameter lies outside the domain of the formula (e.g. `|z| >= 1`).
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally invalid input: malformed measures, empty grids, bad ranges.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A theorem harness was called outside the hypotheses it checks.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Adaptive quadrature ran out of its evaluation budget.
    #[error(
        "quadrature did not converge after {evaluations} evaluations \
         (estimate {estimate}, error estimate {error_estimate})"
    )]
    NonConvergence {
        estimate: f64,
        error_estimate: f64,
        evaluations: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
