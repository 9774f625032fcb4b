use thiserror::Error;

use crate::expr::ExprError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("order alpha must lie in (0, 1], got {0}")]
    OrderOutOfRange(f64),

    #[error("condition gamma + p >= q violated: {gamma} + {p} < {q}")]
    ConditionViolated { gamma: f64, p: f64, q: f64 },

    #[error("truncation index must be at least 1, got {0}")]
    TruncationTooSmall(i64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("limit did not converge: successive extrapolants {previous} and {last}")]
    NonConvergence { last: f64, previous: f64 },

    #[error(
        "quadrature tolerance not met after {subdivisions} subdivisions \
         (value {value}, error estimate {error_estimate})"
    )]
    ToleranceNotMet {
        value: f64,
        error_estimate: f64,
        evaluations: usize,
        subdivisions: usize,
    },

    #[error("expression grew to {nodes} nodes")]
    ExpressionBlowup { nodes: usize },

    #[error("exponents r = {r} and s = {s} are not conjugate (need r, s > 1 and 1/r + 1/s = 1)")]
    ConjugateExponent { r: f64, s: f64 },

    #[error("direction {direction} requires {requirement}, got x0 = {x0}, t = {t}")]
    DirectionMismatch {
        direction: &'static str,
        requirement: &'static str,
        x0: f64,
        t: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Expr(#[from] ExprError),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
