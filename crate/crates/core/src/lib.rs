//! Numerical hyperbolic metrics on plane domains.
//!
//! The density λ of the complete curvature −1 metric on a hyperbolic domain
//! Ω ⊂ Ĉ solves Δ log λ = λ². This crate builds domains from analytic
//! primitives, evaluates closed-form densities, solves the equation on a
//! grid when no closed form is available, computes the pseudo-capacity of
//! compact sets, and checks submultiplicativity of densities and capacities.

pub mod capacity;
pub mod catalog;
pub mod error;
pub mod geometry;
pub mod grid;
mod point;
pub mod solver;
pub mod verify;

pub use catalog::{ClosedFormMetric, ConformalPrimitive};
pub use error::{Error, Result};
pub use geometry::{CompactSpec, PointCount, Primitive, RegionSpec};
pub use point::{BBox, Point};

/// Library version, echoed in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
