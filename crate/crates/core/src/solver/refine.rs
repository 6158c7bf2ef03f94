//! Grid refinement studies and domain exhaustion.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::RegionSpec;
use crate::grid::{erode, Chart, Domain};
use crate::point::{BBox, Point};
use crate::solver::newton::solve_domain;

/// Where a density is read off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Query {
    Point(Point),
    /// z = ∞ in the inversion chart (chart density μ(0)).
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub h: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementReport {
    pub levels: Vec<Level>,
    pub extrapolated: f64,
    /// Observed order from the three finest levels, when defined.
    pub order: Option<f64>,
}

fn check_levels(h_list: &[f64]) -> Result<()> {
    if h_list.len() < 3 {
        return Err(Error::InvalidInput(
            "refinement needs at least three levels".into(),
        ));
    }
    if h_list.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
        return Err(Error::InvalidInput("spacings must be positive".into()));
    }
    if h_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput(
            "spacings must be strictly decreasing".into(),
        ));
    }
    Ok(())
}

/// Observed convergence order from three levels (coarse to fine).
pub fn observed_order(levels: &[Level]) -> Option<f64> {
    let [a, b, c] = levels else { return None };
    let d1 = a.value - b.value;
    let d2 = b.value - c.value;
    if d1 == 0.0 || d2 == 0.0 || d1.signum() != d2.signum() {
        return None;
    }
    let rho = d1 / d2;
    let g = |p: f64| (a.h.powf(p) - b.h.powf(p)) / (b.h.powf(p) - c.h.powf(p));
    let r1 = a.h / b.h;
    let r2 = b.h / c.h;
    if (r1 - r2).abs() <= 1e-12 * r1 {
        let p = rho.ln() / r1.ln();
        return (p.is_finite() && p > 0.0).then_some(p);
    }
    let (mut lo, mut hi) = (1e-3, 20.0);
    if !(g(lo) <= rho && rho <= g(hi)) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < rho {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Richardson extrapolation of the two finest levels assuming an h² error.
pub fn richardson(levels: &[Level]) -> Result<f64> {
    let n = levels.len();
    if n < 2 {
        return Err(Error::InvalidInput("extrapolation needs two levels".into()));
    }
    let (coarse, fine) = (levels[n - 2], levels[n - 1]);
    let r2 = (coarse.h / fine.h).powi(2);
    if !(r2 > 1.0) {
        return Err(Error::InvalidInput(
            "spacings must be strictly decreasing".into(),
        ));
    }
    Ok(fine.value + (fine.value - coarse.value) / (r2 - 1.0))
}

/// Builds a report from per-level values.
pub fn extrapolate(levels: Vec<Level>) -> Result<RefinementReport> {
    check_levels(&levels.iter().map(|l| l.h).collect::<Vec<_>>())?;
    let extrapolated = richardson(&levels)?;
    let order = observed_order(&levels[levels.len() - 3..]);
    Ok(RefinementReport {
        levels,
        extrapolated,
        order,
    })
}

fn read(field: &crate::solver::LogDensityField, query: Query) -> Result<f64> {
    match query {
        Query::Point(z) => field.density_at(z),
        Query::Infinity => field.density_at_infinity(),
    }
}

/// Solves on each spacing and extrapolates the value at `query`.
pub fn refine_and_extrapolate(
    domain: &dyn Domain,
    chart: Chart,
    bbox: BBox,
    query: Query,
    h_list: &[f64],
) -> Result<RefinementReport> {
    check_levels(h_list)?;
    let levels = h_list
        .iter()
        .map(|&h| {
            let field = solve_domain(domain, chart, bbox, h)?;
            Ok(Level {
                h,
                value: read(&field, query)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    extrapolate(levels)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExhaustionLevel {
    pub delta: f64,
    pub h: f64,
    pub value: f64,
}

/// Tolerance on the monotone decrease of exhaustion values.
pub const EXHAUSTION_TOL: f64 = 1e-8;

/// Densities at `query` on the eroded domains {dist(·, ∂Ω) > δ_n}, which
/// increase to Ω as δ_n decreases; the values must not increase.
pub fn exhaustion(
    region: &RegionSpec,
    chart: Chart,
    bbox: BBox,
    query: Query,
    deltas: &[f64],
    h_list: &[f64],
) -> Result<Vec<ExhaustionLevel>> {
    if deltas.len() != h_list.len() || deltas.is_empty() {
        return Err(Error::InvalidInput(
            "need one spacing per erosion depth".into(),
        ));
    }
    if deltas.windows(2).any(|w| w[1] >= w[0]) || deltas.iter().any(|d| !(*d > 0.0)) {
        return Err(Error::InvalidInput(
            "erosion depths must be positive and strictly decreasing".into(),
        ));
    }
    let mut out: Vec<ExhaustionLevel> = Vec::new();
    for (&delta, &h) in deltas.iter().zip(h_list) {
        let field = solve_domain(&erode(region, delta), chart, bbox, h)?;
        let value = read(&field, query)?;
        if let Some(prev) = out.last() {
            if value > prev.value + EXHAUSTION_TOL {
                return Err(Error::InvariantViolation(format!(
                    "exhaustion value rose from {} to {} at δ = {delta}",
                    prev.value, value
                )));
            }
        }
        out.push(ExhaustionLevel { delta, h, value });
    }
    Ok(out)
}
