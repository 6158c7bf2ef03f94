use thiserror::Error;

/// Errors raised by the geometry, solver, capacity and verification layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed region: {0}")]
    Structural(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("point ({x}, {y}) is outside the domain: {reason}")]
    Domain { x: f64, y: f64, reason: String },
    #[error("hyperbolicity is indeterminate for this region: {0}")]
    Indeterminate(String),
    #[error("erosion by {delta} leaves no grid nodes")]
    Exhausted { delta: f64 },
    #[error("grid has no interior nodes")]
    EmptyGrid,
    #[error("boundary band node at distance {distance:e} is degenerate")]
    DegenerateBand { distance: f64 },
    #[error("Newton iteration did not converge after {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("linear solve failed: {0}")]
    SingularSystem(String),
    #[error("conformal map is singular at ({x}, {y})")]
    SingularMap { x: f64, y: f64 },
    #[error("query point ({x}, {y}) is outside the hull of solved nodes")]
    OutOfHull { x: f64, y: f64 },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported oracle: {0}")]
    UnsupportedOracle(String),
    #[error("no admissible samples: {0}")]
    NoSamples(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(p: crate::Point, reason: impl Into<String>) -> Self {
        Error::Domain {
            x: p.x,
            y: p.y,
            reason: reason.into(),
        }
    }
}
