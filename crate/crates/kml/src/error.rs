use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("field is defined on a different grid")]
    GridMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("zero field where a nonzero field is required")]
    ZeroField,

    #[error("shooting bracket not found: {0}")]
    BracketNotFound(String),

    #[error("did not converge: {0}")]
    NonConvergence(String),

    #[error("ground-state invariant violated: {0}")]
    InvariantViolation(String),

    #[error("mass outside the existence region: {0}")]
    OutsideExistence(String),

    #[error("exponent regime mismatch: {0}")]
    Regime(String),

    #[error("scaled field is unresolved on this grid: {0}")]
    Unresolved(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error("cache conflict: existing file at {0} holds different data")]
    CacheConflict(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
