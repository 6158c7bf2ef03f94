//! Blow-up data on the fixed nodes of a grid.
//!
//! Near a smooth boundary point the density is taken from the simple domain
//! bounded by the nearest piece: a disk, disk exterior or half-plane, or for
//! a slit the plane cut along a ray from the nearer endpoint. Pieces with no
//! such model use 1/(d(1 − κd/2)) at distance d and boundary curvature κ.
//! Near an isolated puncture at distance r the punctured-disk model
//! 1/(r log(1/r)) is used.
//!
//! Both models are exact solutions of the curvature equation (for the
//! osculating disk, half-plane or disk exterior, and for the punctured unit
//! disk). Within a fixed layer along the boundary the solver subtracts the
//! discrete residual of the local model, which removes the O(h) error the
//! blow-up would otherwise leave in the five-point scheme.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{chart_distance, Chart, Domain, Grid, NodeClass};
use crate::point::Point;

/// Smallest boundary distance accepted for a band node.
pub const MIN_BAND_DISTANCE: f64 = 1e-14;

/// Values of u = log of the chart density on fixed nodes; NaN elsewhere.
#[derive(Debug, Clone)]
pub struct BoundaryData {
    pub values: Vec<f64>,
}

/// log λ from the smooth-boundary model at plane distance `d`.
pub fn band_model(d: f64, curvature: f64) -> Result<f64> {
    if !(d >= MIN_BAND_DISTANCE) {
        return Err(Error::DegenerateBand { distance: d });
    }
    let f = (1.0 - 0.5 * curvature * d).clamp(0.5, 2.0);
    Ok(-d.ln() - f.ln())
}

/// log λ from the punctured unit disk model at plane distance `r` from a
/// puncture.
pub fn ring_model(r: f64) -> Result<f64> {
    ring_model_scaled(r, 1.0)
}

/// log λ of the punctured disk of radius `scale`, 1/(r log(scale/r)).
pub fn ring_model_scaled(r: f64, scale: f64) -> Result<f64> {
    if !(r >= MIN_BAND_DISTANCE) {
        return Err(Error::DegenerateBand { distance: r });
    }
    let l = (scale / r).ln();
    if l < 0.5 {
        return Err(Error::InvalidInput(format!(
            "puncture ring radius {r} is too large for the punctured-disk model"
        )));
    }
    Ok(-(r * l).ln())
}

fn nearest_puncture(punctures: &[Point], z: Point) -> Option<(f64, usize)> {
    punctures
        .iter()
        .enumerate()
        .map(|(i, q)| (z.dist(*q), i))
        .min_by(|a, b| a.0.total_cmp(&b.0))
}

/// Model data for every fixed node of `grid`, with unit punctured disks at
/// the punctures.
pub fn boundary_data(domain: &dyn Domain, grid: &Grid) -> Result<BoundaryData> {
    boundary_data_fitted(domain, grid, &[])
}

/// Local puncture model 1/(r L) with L = log(1/r) + log_scale + slope·(z − q).
///
/// The default is the punctured unit disk. A nonzero slope is the first
/// harmonic correction of 1/(rλ) − log(1/r) away from the puncture.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RingFit {
    pub log_scale: f64,
    pub slope: Point,
}

impl RingFit {
    /// log λ at `z`, a plane distance r > 0 from puncture `q`.
    pub fn model(&self, z: Point, q: Point) -> Result<f64> {
        let r = z.dist(q);
        if !(r >= MIN_BAND_DISTANCE) {
            return Err(Error::DegenerateBand { distance: r });
        }
        let l = -r.ln() + self.log_scale + self.slope.dot(z - q);
        if !(l >= 0.5) {
            return Err(Error::InvalidInput(format!(
                "puncture ring radius {r} is too large for the punctured-disk model"
            )));
        }
        Ok(-(r * l).ln())
    }
}

/// Model data with the puncture models `fits` (the punctured unit disk
/// where `fits` is short).
pub fn boundary_data_fitted(
    domain: &dyn Domain,
    grid: &Grid,
    fits: &[RingFit],
) -> Result<BoundaryData> {
    let punctures = domain.punctures();
    let ring = |z: Point, i: usize| {
        fits.get(i)
            .copied()
            .unwrap_or_default()
            .model(z, punctures[i])
    };
    let values = (0..grid.len())
        .into_par_iter()
        .map(|k| -> Result<f64> {
            let class = grid.class[k];
            if !class.is_fixed() {
                return Ok(f64::NAN);
            }
            let w = grid.node(k);
            let z = grid.plane_point(k).ok_or_else(|| {
                Error::Precondition("the point at infinity is too close to the boundary".into())
            })?;
            if class == NodeClass::Edge && grid.chart == crate::grid::Chart::Identity {
                return Err(Error::Precondition(
                    "identity-chart window nodes need explicit boundary values".into(),
                ));
            }
            let d = domain.smooth_distance(z);
            let band = || match domain.boundary_model(z) {
                Some(u) if d >= MIN_BAND_DISTANCE => Ok(u),
                _ => band_model(d, domain.boundary_curvature(z)),
            };
            let r = nearest_puncture(&punctures, z);
            let u = match class {
                NodeClass::Band => band()?,
                NodeClass::Ring => {
                    let (r, i) = r.expect("ring node without a puncture");
                    let _ = r;
                    let ring = ring(z, i)?;
                    if d.is_finite() && grid.chart.distance_lower_bound(w, d, None) <= 2.0 * grid.h
                    {
                        ring.max(band()?)
                    } else {
                        ring
                    }
                }
                _ => match r {
                    Some((r, i)) if r < d => ring(z, i)?,
                    _ => band()?,
                },
            };
            Ok(u + grid.chart.log_jacobian(w))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryData { values })
}

/// Chart distance from the boundary within which the local model's discrete
/// residual is subtracted.
pub const CORRECTION_LAYER: f64 = 0.25;

/// Chart log-density of the local model at `w` and the boundary piece it
/// belongs to.
fn local_model(
    domain: &dyn Domain,
    chart: &Chart,
    punctures: &[Point],
    fits: &[RingFit],
    w: Point,
) -> Option<(f64, usize)> {
    let z = chart.to_plane(w)?;
    let d = domain.smooth_distance(z);
    let jac = chart.log_jacobian(w);
    match nearest_puncture(punctures, z) {
        Some((r, i)) if r < d => {
            // The exact punctured disk of radius R = e^{log_scale}; the
            // slope term is not a solution and is left to the boundary data.
            let scale = fits.get(i).map_or(1.0, |f| f.log_scale.exp());
            if r < 0.5 * scale {
                Some((ring_model_scaled(r, scale).ok()? + jac, usize::MAX - i))
            } else {
                None
            }
        }
        _ => {
            if let (true, Some(u)) = (d.is_finite(), domain.boundary_model(z)) {
                return Some((u + jac, domain.boundary_piece(z)));
            }
            let k = domain.boundary_curvature(z);
            if !d.is_finite() || (k * d).abs() > 1.0 {
                return None;
            }
            Some((band_model(d, k).ok()? + jac, domain.boundary_piece(z)))
        }
    }
}

/// Source term s for Δ_h u − e^{2u} = s: the discrete residual of the local
/// model at interior nodes within `CORRECTION_LAYER` of the boundary whose
/// whole stencil sees the same boundary piece; zero elsewhere.
pub fn model_correction(domain: &dyn Domain, grid: &Grid) -> Vec<f64> {
    model_correction_fitted(domain, grid, &[])
}

/// `model_correction` with puncture models as in `boundary_data_fitted`.
pub fn model_correction_fitted(domain: &dyn Domain, grid: &Grid, fits: &[RingFit]) -> Vec<f64> {
    let punctures = domain.punctures();
    let radius = match grid.chart {
        Chart::Identity => None,
        Chart::Inversion { center } => domain.boundary_radius(center),
    };
    let h2 = grid.h * grid.h;
    (0..grid.len())
        .into_par_iter()
        .map(|k| {
            if grid.class[k] != NodeClass::Interior {
                return 0.0;
            }
            let w = grid.node(k);
            if chart_distance(domain, &grid.chart, w, radius) > CORRECTION_LAYER {
                return 0.0;
            }
            let Some((uc, piece)) = local_model(domain, &grid.chart, &punctures, fits, w) else {
                return 0.0;
            };
            let mut sum = 0.0;
            for n in grid.neighbors(k).into_iter().flatten() {
                match local_model(domain, &grid.chart, &punctures, fits, grid.node(n)) {
                    Some((un, pn)) if pn == piece => sum += un,
                    _ => return 0.0,
                }
            }
            let tau = (sum - 4.0 * uc) / h2 - (2.0 * uc).exp();
            if tau.is_finite() {
                tau
            } else {
                0.0
            }
        })
        .collect()
}

/// Puncture layer used for the fit, as multiples of the largest plane
/// distance of a fixed node assigned to the puncture.
const FIT_LAYER: (f64, f64) = (1.25, 1.75);

/// Puncture models matching the solved chart log-density `u` just outside
/// the fixed nodes of each puncture.
///
/// The punctured unit disk is only the leading term near a puncture: the
/// constant in log(R/r) depends on the whole domain and its error decays
/// like 1/log(1/h). Near q, 1/(rλ) − log(1/r) is close to a harmonic
/// function, so its constant and linear terms are fitted by least squares.
/// Punctures without fixed or fit nodes keep `fits[i]`.
pub fn fit_rings(domain: &dyn Domain, grid: &Grid, u: &[f64], fits: &[RingFit]) -> Vec<RingFit> {
    let punctures = domain.punctures();
    let owner = |k: usize| -> Option<(Point, f64, usize)> {
        let z = grid.plane_point(k)?;
        let (r, i) = nearest_puncture(&punctures, z)?;
        (r < domain.smooth_distance(z)).then_some((z, r, i))
    };
    let mut reach = vec![0.0f64; punctures.len()];
    for k in 0..grid.len() {
        if matches!(grid.class[k], NodeClass::Ring | NodeClass::Edge) {
            if let Some((_, r, i)) = owner(k) {
                reach[i] = reach[i].max(r);
            }
        }
    }
    // Normal equations of v = a0 + a·(z − q), scaled by the layer radius.
    let mut normal = vec![([[0.0f64; 3]; 3], [0.0f64; 3]); punctures.len()];
    for k in 0..grid.len() {
        if grid.class[k] != NodeClass::Interior {
            continue;
        }
        let Some((z, r, i)) = owner(k) else { continue };
        if !(r >= FIT_LAYER.0 * reach[i] && r <= FIT_LAYER.1 * reach[i]) {
            continue;
        }
        let lambda = (u[k] - grid.chart.log_jacobian(grid.node(k))).exp();
        let v = 1.0 / (r * lambda) + r.ln();
        if !v.is_finite() {
            continue;
        }
        let d = (z - punctures[i]) * (1.0 / reach[i]);
        let row = [1.0, d.x, d.y];
        let (m, b) = &mut normal[i];
        for a in 0..3 {
            for c in 0..3 {
                m[a][c] += row[a] * row[c];
            }
            b[a] += row[a] * v;
        }
    }
    normal
        .into_iter()
        .enumerate()
        .map(|(i, (m, b))| {
            let current = fits.get(i).copied().unwrap_or_default();
            if m[0][0] < 3.0 {
                return current;
            }
            match solve3(m, b) {
                Some(a) => RingFit {
                    log_scale: a[0],
                    slope: Point::new(a[1], a[2]) * (1.0 / reach[i]),
                },
                None => RingFit {
                    log_scale: b[0] / m[0][0],
                    slope: Point::ORIGIN,
                },
            }
        })
        .collect()
}

fn solve3(m: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let x = solve_dense(m.iter().map(|r| r.to_vec()).collect(), b.to_vec())?;
    Some([x[0], x[1], x[2]])
}

/// Gaussian elimination with partial pivoting; `None` if near singular.
pub(crate) fn solve_dense(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = (0..n)
        .map(|i| m[i][i].abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs()))?;
        if !(m[p][c].abs() > 1e-12 * scale) {
            return None;
        }
        m.swap(c, p);
        b.swap(c, p);
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| m[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / m[r][r];
    }
    Some(x)
}

/// Boundary values from a known plane log-density `log_lambda(z)`.
pub fn boundary_data_from_fn<F>(grid: &Grid, log_lambda: F) -> Result<BoundaryData>
where
    F: Fn(Point) -> Result<f64> + Sync,
{
    let values = (0..grid.len())
        .into_par_iter()
        .map(|k| -> Result<f64> {
            if !grid.class[k].is_fixed() {
                return Ok(f64::NAN);
            }
            let w = grid.node(k);
            let z = grid
                .plane_point(k)
                .ok_or_else(|| Error::Precondition("boundary node at infinity".into()))?;
            Ok(log_lambda(z)? + grid.chart.log_jacobian(w))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryData { values })
}
