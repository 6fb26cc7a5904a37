use thiserror::Error;

/// Error type shared by every operation in the crate.
#[derive(Debug, Clone, Error)]
pub enum FinslerError {
    #[error("zero vector is not admissible here")]
    ZeroVector,
    #[error("point lies outside the domain of the space")]
    OutsideDomain,
    #[error("point lies outside the open unit ball")]
    OutsideBall,
    #[error("operation is singular at the origin")]
    AtOrigin,
    #[error("iteration did not converge within {0} steps")]
    NoConvergence(usize),
    #[error("trajectory left the domain at step {0}")]
    LeftDomain(usize),
    #[error("flag is degenerate (denominator below threshold)")]
    DegenerateFlag,
    #[error("no measure density registered for this space")]
    MissingDensity,
    #[error("no admissible quartic root for the co-metric: {0}")]
    NoAdmissibleRoot(String),
    #[error("quadrature failed to reach tolerance (estimate {estimate}, error {error})")]
    QuadratureFailure { estimate: f64, error: f64 },
    #[error("argument outside the domain of the special function")]
    DomainError,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("not enough data points (need {need}, got {got})")]
    InsufficientData { need: usize, got: usize },
    #[error("encountered a nonpositive value where a positive one is required")]
    NonpositiveValue,
}
