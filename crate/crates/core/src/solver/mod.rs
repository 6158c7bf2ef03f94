//! Finite-difference solution of Δu = e^{2u} with blow-up boundary data.

mod boundary;
mod field;
mod linear;
mod newton;
mod refine;

pub use boundary::{
    band_model, boundary_data, boundary_data_fitted, boundary_data_from_fn, fit_rings,
    model_correction, model_correction_fitted, ring_model, ring_model_scaled, BoundaryData,
    RingFit, CORRECTION_LAYER, MIN_BAND_DISTANCE,
};
pub use field::LogDensityField;
pub use newton::{
    default_init, solve_domain, solve_liouville, NewtonStep, SolveOptions, RING_FIT_ITERATIONS,
    RING_FIT_TOLERANCE,
};
pub use refine::{
    exhaustion, extrapolate, observed_order, refine_and_extrapolate, richardson, ExhaustionLevel,
    Level, Query, RefinementReport, EXHAUSTION_TOL,
};
