//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A continued-fraction digit below 2 makes the recursion meaningless.
    #[error("digit e_{index} = {value} is invalid (every digit must be >= 2)")]
    InvalidDigit { index: usize, value: i64 },

    /// Asked for a deeper table than the digit sequence can provide.
    #[error("depth {requested} exceeds the {available} digits available")]
    DepthUnavailable { requested: usize, available: usize },

    /// The query point lies inside the unresolved enclosure window of a
    /// truncated table; deepening the table is the only correct response,
    /// extrapolating silently is not.
    #[error(
        "x = {x} lies inside the unresolved window of the depth-{depth} table; \
         increase the depth to resolve it"
    )]
    InsufficientDepth { x: f64, depth: usize },

    /// Slope/intercept data is undefined exactly at the odd-symmetry centre.
    #[error("slope/intercept is undefined at the reflection centre")]
    AtReflectionCentre,

    /// The a-posteriori truncation bound exceeded the caller's tolerance.
    #[error(
        "truncation bound {bound:e} exceeds tolerance {tol:e} at ({x}, {y}); \
         increase the table depth"
    )]
    TruncationBudget { x: f64, y: f64, bound: f64, tol: f64 },

    /// Metric evaluation hit a degeneracy (f = 0, w = 0 or y <= 0).
    #[error("metric is degenerate at ({x}, {y}): {reason}")]
    DegenerateMetric { x: f64, y: f64, reason: String },

    /// Adaptive quadrature could not reach the requested accuracy.
    #[error("quadrature stalled: requested {requested:e}, achieved {achieved:e}")]
    Quadrature { requested: f64, achieved: f64 },

    /// Malformed user input (digit strings, grid specs, rationals, ...).
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
