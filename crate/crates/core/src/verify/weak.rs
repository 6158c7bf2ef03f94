use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::RegionSpec;
use crate::point::{BBox, Point};
use crate::verify::eval::{evaluators, DensityEval, Mode, PdeOptions};
use crate::verify::theorem::{densities, draw_samples, sample_window, Quad};

/// Lower bound 1/√2 on λ₁λ₂ / (λ_∪λ_∩) that the weak form asserts.
pub const WEAK_CONSTANT: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Finite-difference step for closed forms, relative to the boundary distance.
const ORACLE_STEP: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakSample {
    pub point: Point,
    /// λ₁λ₂/λ_∪ at the point.
    pub product_density: f64,
    /// −Δ log ρ / ρ² for ρ the product density.
    pub curvature: f64,
    /// λ₁λ₂ / (λ_∪λ_∩).
    pub ratio: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakConstantReport {
    pub samples: Vec<WeakSample>,
    pub min_curvature: f64,
    pub min_ratio: f64,
    /// min curvature ≥ −2 − tol.
    pub curvature_ok: bool,
    /// min ratio ≥ 1/√2.
    pub inequality_ok: bool,
    pub tolerance: f64,
    pub mode: Mode,
    pub h: f64,
    pub sample_window: BBox,
    pub seed: u64,
}

fn log_product(evals: &[DensityEval], z: Point) -> Result<f64> {
    let l = densities(evals, z)?;
    Ok(l[0].ln() + l[1].ln() - l[2].ln())
}

/// Curvature of ρ = λ₁λ₂/λ_∪ on U₁∩U₂ by the five-point Laplacian of log ρ,
/// and the ratio λ₁λ₂/(λ_∪λ_∩), at `sample_count` points.
///
/// Closed forms use a step of 1% of the boundary distance; solved fields use
/// the grid spacing so the stencil sits on nodes.
pub fn verify_weak_constant(
    u1: &RegionSpec,
    u2: &RegionSpec,
    sample_count: usize,
    tol: f64,
    mode: Mode,
    opts: &PdeOptions,
) -> Result<WeakConstantReport> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be nonnegative, got {tol}"
        )));
    }
    if sample_count == 0 {
        return Err(Error::InvalidInput("sample count must be positive".into()));
    }
    let quad = Quad::new(u1, u2)?;
    let window = sample_window(&quad.inter, opts);
    let points = draw_samples(&quad.inter, window, opts.h, sample_count, opts.seed)?;
    let evals = evaluators(&quad.all(), mode, opts)?;
    let solved = evals[..3].iter().any(|e| e.field().is_some());
    let samples = points
        .iter()
        .map(|&z| {
            let step = if solved {
                opts.h
            } else {
                ORACLE_STEP * -quad.inter.sdf(z)
            };
            let l = densities(&evals, z)?;
            let rho = l[0] * l[1] / l[2];
            let mut lap = -4.0 * rho.ln();
            for d in [
                Point::new(step, 0.0),
                Point::new(-step, 0.0),
                Point::new(0.0, step),
                Point::new(0.0, -step),
            ] {
                lap += log_product(&evals, z + d)?;
            }
            lap /= step * step;
            Ok(WeakSample {
                point: z,
                product_density: rho,
                curvature: -lap / (rho * rho),
                ratio: (l[0] * l[1]) / (l[2] * l[3]),
                step,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let min_curvature = samples
        .iter()
        .map(|s| s.curvature)
        .fold(f64::INFINITY, f64::min);
    let min_ratio = samples
        .iter()
        .map(|s| s.ratio)
        .fold(f64::INFINITY, f64::min);
    Ok(WeakConstantReport {
        min_curvature,
        min_ratio,
        curvature_ok: min_curvature >= -2.0 - tol,
        inequality_ok: min_ratio >= WEAK_CONSTANT,
        tolerance: tol,
        mode,
        h: opts.h,
        sample_window: window,
        seed: opts.seed,
        samples,
    })
}
