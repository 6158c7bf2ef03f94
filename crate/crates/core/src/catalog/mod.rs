//! Closed-form hyperbolic densities, conformal transport, and the
//! finite-difference curvature check.

mod conformal;
mod metric;
mod resolve;
mod tag;

pub use conformal::ConformalPrimitive;
pub use metric::{curvature_residual, eval_density, pullback, ClosedFormMetric};
pub use resolve::resolve;
pub use tag::parse_tag;
