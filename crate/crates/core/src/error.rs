use thiserror::Error;

/// Errors raised by the evaluators in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `K(k)` diverges logarithmically at `k = 1`.
    #[error("complete elliptic integral of the first kind diverges at k = 1")]
    Divergent,

    /// The arithmetic-geometric mean did not settle within the iteration cap.
    #[error("AGM did not converge within {iters} iterations (last gap {gap:e})")]
    IterationLimit { iters: usize, gap: f64 },

    /// A series was cut off at `max_terms` before meeting its stop rule.
    #[error("series truncated after {terms} terms (tail estimate {tail:e})")]
    Truncation { terms: usize, tail: f64 },

    /// The elliptic combination is `inf - inf` at `(±1, 0)` and `(0, ±1)`.
    #[error("(a, b) = ({a}, {b}) is a corner point where the elliptic combination is singular; use the axis evaluator")]
    Corner { a: f64, b: f64 },

    /// The requested method is not defined at this point.
    #[error("method `{method}` is not defined at (a, b) = ({a}, {b}): {hint}")]
    MethodDomain {
        method: &'static str,
        a: f64,
        b: f64,
        hint: String,
    },

    #[error("invalid tolerance configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// True for errors caused by the input lying outside an admissible region.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::Corner { .. } | Error::MethodDomain { .. } | Error::Divergent
        )
    }

    /// True for iteration or truncation failures.
    pub fn is_convergence(&self) -> bool {
        matches!(
            self,
            Error::IterationLimit { .. } | Error::Truncation { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
