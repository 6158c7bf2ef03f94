//! Numerical checks of the submultiplicativity inequality
//! λ₁λ₂ ≥ λ_∪λ_∩, its equality case, the weak constant, the boundary ratio
//! and capacity submultiplicativity.

mod boundary;
mod capacity;
mod eval;
mod theorem;
mod weak;

pub use boundary::{boundary_ratio, radial_approach};
pub use capacity::{verify_capacity_submult, CapacitySubmultReport};
pub use eval::{DensityEval, Mode, PdeOptions};
pub use theorem::{
    components_nested, submult_ratio, verify_theorem1, verify_theorem1_with_densities, Sample,
    VerificationReport, DEFAULT_SEED,
};
pub use weak::{verify_weak_constant, WeakConstantReport, WeakSample, WEAK_CONSTANT};
