use thiserror::Error;

/// Errors surfaced by the core library.
#[derive(Debug, Error)]
pub enum CoreError {
    /// The evaluation point is too close to the parametric tail for a
    /// certified series bound (requires |z| <= cutoff/2).
    #[error("evaluation radius {radius} exceeds tail cutoff/2 = {limit}")]
    TailTooClose { radius: f64, limit: f64 },

    #[error("quadrature did not converge below tol {tol} within {max_nodes} nodes")]
    NoConvergence { tol: f64, max_nodes: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid descriptor field `{field}`: {message}")]
    InvalidDescriptor { field: &'static str, message: String },

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("boundary sample too small: need {needed}, have {have}")]
    InsufficientBoundary { needed: usize, have: usize },

    #[error("capacity estimate is zero; Green function undefined")]
    ZeroCapacity,

    #[error("circle |z| = {radius} touches the set")]
    CircleTouchesSet { radius: f64 },

    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
