/// Library-wide error type.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameter rejected before any computation (e.g. positive real ray,
    /// bounded critical orbit, |delta| below the resolvable floor).
    #[error("inadmissible parameter: {0}")]
    Inadmissible(String),

    /// An inverse branch was asked for the preimage of the critical value.
    #[error("critical value hit at branch word '{0}'")]
    CriticalValue(String),

    /// The pressure has no sign change over the root bracket.
    #[error("pressure does not change sign over [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    /// An iterative scheme stopped without meeting its tolerance.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// Adaptive quadrature could not meet the requested tolerance.
    #[error("quadrature failure: {0}")]
    Quadrature(String),

    /// An operation that needs a nonempty input got an empty one.
    #[error("empty input: {0}")]
    Empty(String),

    /// A NaN appeared where a finite value is required.
    #[error("NaN encountered: {0}")]
    NotFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
