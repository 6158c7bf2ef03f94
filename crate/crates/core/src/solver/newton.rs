//! Damped Newton iteration for Δ_h u = e^{2u} on the interior nodes.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{chart_distance, Domain, Grid, NodeClass};
use crate::solver::boundary::BoundaryData;
use crate::solver::field::LogDensityField;
use crate::solver::linear::{Stencil, System, NONE};

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Starting field on all nodes (chart log-density); fixed nodes are
    /// overwritten with boundary data.
    pub init: Option<Vec<f64>>,
    /// Accept an `init` that is not a discrete supersolution.
    pub force: bool,
    /// Source s in Δ_h u − e^{2u} = s, per node (zero when absent).
    pub source: Option<Vec<f64>>,
    pub max_iterations: usize,
    /// Target for ‖Δ_h u − e^{2u}‖_∞; raised to the round-off floor of the
    /// discrete operator when that is larger.
    pub tolerance: f64,
    pub linear_tolerance: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            init: None,
            force: false,
            source: None,
            max_iterations: 100,
            tolerance: 1e-10,
            linear_tolerance: 1e-12,
        }
    }
}

/// One Newton iteration: residual before the step and the applied update.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NewtonStep {
    pub residual: f64,
    pub damping: f64,
    pub max_change: f64,
    pub min_change: f64,
    pub linear_residual: f64,
}

struct Layout {
    /// Node index of each unknown.
    nodes: Vec<usize>,
    stencil: Stencil,
}

fn layout(grid: &Grid) -> Layout {
    let mut index = vec![NONE; grid.len()];
    let mut nodes = Vec::new();
    for k in 0..grid.len() {
        if grid.class[k] == NodeClass::Interior {
            index[k] = nodes.len() as u32;
            nodes.push(k);
        }
    }
    let mut nbr = Vec::with_capacity(nodes.len());
    for &k in &nodes {
        let mut row = [NONE; 4];
        for (slot, n) in grid.neighbors(k).into_iter().enumerate() {
            let n = n.expect("interior node on the grid frame");
            if index[n] != NONE {
                row[slot] = index[n];
            }
        }
        nbr.push(row);
    }
    Layout {
        nodes,
        stencil: Stencil { nbr },
    }
}

/// Residual F = Δ_h u − e^{2u} − s and its round-off scale per unknown.
fn residual(lay: &Layout, grid: &Grid, u: &[f64], source: Option<&[f64]>) -> (Vec<f64>, Vec<f64>) {
    let h2 = grid.h * grid.h;
    lay.nodes
        .par_iter()
        .map(|&k| {
            let uk = u[k];
            let mut s = 0.0;
            let mut mag = 4.0 * uk.abs();
            for n in grid.neighbors(k).into_iter().flatten() {
                s += u[n];
                mag += u[n].abs();
            }
            let e = (2.0 * uk).exp();
            let src = source.map_or(0.0, |v| v[k]);
            ((s - 4.0 * uk) / h2 - e - src, mag / h2 + e + src.abs())
        })
        .unzip()
}

fn max_abs(v: &[f64]) -> f64 {
    v.par_iter().map(|x| x.abs()).reduce(|| 0.0, f64::max)
}

const ROUNDOFF: f64 = 16.0 * f64::EPSILON;

/// Starting field log(2/d): the density of the largest disk about each node
/// inside the domain, which bounds the solution from above.
pub fn default_init(domain: &dyn Domain, grid: &Grid) -> Vec<f64> {
    let radius = match grid.chart {
        crate::grid::Chart::Identity => None,
        crate::grid::Chart::Inversion { center } => domain.boundary_radius(center),
    };
    (0..grid.len())
        .into_par_iter()
        .map(|k| {
            if grid.class[k] == NodeClass::Interior {
                let d = chart_distance(domain, &grid.chart, grid.node(k), radius);
                (2.0 / d.max(grid.h)).ln()
            } else {
                f64::NAN
            }
        })
        .collect()
}

/// Solves Δ_h u = e^{2u} with u fixed on band, ring and edge nodes.
pub fn solve_liouville(
    grid: &Grid,
    data: &BoundaryData,
    opts: &SolveOptions,
) -> Result<LogDensityField> {
    if data.values.len() != grid.len() {
        return Err(Error::InvalidInput(
            "boundary data does not match the grid".into(),
        ));
    }
    let mut u = vec![f64::NAN; grid.len()];
    let mut umax = f64::NEG_INFINITY;
    for k in 0..grid.len() {
        if grid.class[k].is_fixed() {
            let v = data.values[k];
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "non-finite boundary value at node {k}"
                )));
            }
            u[k] = v;
            umax = umax.max(v);
        }
    }
    let source = opts.source.as_deref();
    if source.is_some_and(|v| v.len() != grid.len()) {
        return Err(Error::InvalidInput(
            "source term does not match the grid".into(),
        ));
    }
    let lay = layout(grid);
    if lay.nodes.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for &k in &lay.nodes {
        u[k] = match &opts.init {
            Some(init) => init.get(k).copied().unwrap_or(f64::NAN),
            None => umax,
        };
        if !u[k].is_finite() {
            return Err(Error::InvalidInput(format!(
                "non-finite initial value at node {k}"
            )));
        }
    }
    if opts.init.is_some() && !opts.force {
        let (f, mag) = residual(&lay, grid, &u, source);
        if f.iter().zip(&mag).any(|(f, m)| *f > ROUNDOFF * m) {
            return Err(Error::Precondition(
                "initial field is not a supersolution (set force to use it anyway)".into(),
            ));
        }
    }

    let h2 = grid.h * grid.h;
    let n = lay.nodes.len();
    let mut history = Vec::new();
    let mut delta = vec![0.0; n];
    let mut stalled = 0;
    let mut best = f64::INFINITY;
    for it in 0..=opts.max_iterations {
        let (f, mag) = residual(&lay, grid, &u, source);
        let norm = max_abs(&f);
        let floor = ROUNDOFF * mag.iter().cloned().fold(0.0, f64::max);
        let tol = opts.tolerance.max(floor);
        if !norm.is_finite() {
            return Err(Error::NoConvergence {
                iterations: it,
                residual: norm,
            });
        }
        if norm <= tol || (stalled >= 3 && norm <= 1e3 * tol) {
            return Ok(LogDensityField::new(
                grid.clone(),
                u,
                norm,
                it,
                tol,
                history,
            ));
        }
        if it == opts.max_iterations {
            return Err(Error::NoConvergence {
                iterations: it,
                residual: norm,
            });
        }
        if norm < 0.5 * best {
            stalled = 0;
        } else {
            stalled += 1;
        }
        best = best.min(norm);

        let diag: Vec<f64> = lay
            .nodes
            .par_iter()
            .map(|&k| 4.0 + 2.0 * h2 * (2.0 * u[k]).exp())
            .collect();
        let rhs: Vec<f64> = f.par_iter().map(|x| h2 * x).collect();
        let sys = System {
            stencil: &lay.stencil,
            diag,
        };
        let lin = sys.solve(&rhs, &mut delta, opts.linear_tolerance)?;

        // From a supersolution (and on the first step) the full Newton step
        // is taken: by convexity of e^{2u} it lands on a supersolution again.
        let supersolution = f.iter().zip(&mag).all(|(f, m)| *f <= ROUNDOFF * m);
        let mut t = 1.0;
        let mut trial = u.clone();
        let mut accepted = false;
        for _ in 0..40 {
            for (i, &k) in lay.nodes.iter().enumerate() {
                trial[k] = u[k] + t * delta[i];
            }
            let finite = lay
                .nodes
                .iter()
                .all(|&k| trial[k].is_finite() && trial[k] < 350.0);
            if finite {
                if it == 0 || supersolution {
                    accepted = true;
                    break;
                }
                let (ft, _) = residual(&lay, grid, &trial, source);
                if max_abs(&ft) < norm {
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence {
                iterations: it,
                residual: norm,
            });
        }
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for d in &delta {
            lo = lo.min(t * d);
            hi = hi.max(t * d);
        }
        history.push(NewtonStep {
            residual: norm,
            damping: t,
            max_change: hi,
            min_change: lo,
            linear_residual: lin,
        });
        u = trial;
    }
    unreachable!("loop returns on the last iteration")
}

/// Discretizes, builds model boundary data, and solves from the default
/// starting field.
pub fn solve_domain(
    domain: &dyn Domain,
    chart: crate::grid::Chart,
    bbox: crate::point::BBox,
    h: f64,
) -> Result<LogDensityField> {
    use crate::solver::boundary::{
        boundary_data_fitted, fit_rings, model_correction_fitted, RingFit,
    };
    let grid = crate::grid::discretize(domain, chart, bbox, h)?;
    let n = domain.punctures().len();
    // Fixed point x = g(x) on the puncture model parameters, with a secant
    // step per component once two iterates are known.
    let pack = |f: &[RingFit]| -> Vec<f64> {
        f.iter()
            .flat_map(|r| [r.log_scale, r.slope.x, r.slope.y])
            .collect()
    };
    let unpack = |x: &[f64]| -> Vec<RingFit> {
        x.chunks(3)
            .map(|c| RingFit {
                log_scale: c[0],
                slope: crate::point::Point::new(c[1], c[2]),
            })
            .collect()
    };
    // Start from the plane punctured at q and at its nearest other boundary
    // point, at distance D: near q its density is 1/(r log(16D/r)).
    let punctures = domain.punctures();
    let mut x = vec![0.0f64; 3 * n];
    for (i, q) in punctures.iter().enumerate() {
        let other = punctures
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| q.dist(*p))
            .fold(domain.smooth_distance(*q), f64::min);
        if other.is_finite() && other > 0.0 {
            x[3 * i] = (16.0 * other).ln();
        }
    }
    let mut history: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    let mut init = default_init(domain, &grid);
    let mut iterations = 0;
    loop {
        let fits = unpack(&x);
        let data = boundary_data_fitted(domain, &grid, &fits)?;
        let opts = SolveOptions {
            init: Some(init),
            force: true,
            source: Some(model_correction_fitted(domain, &grid, &fits)),
            ..SolveOptions::default()
        };
        let field = solve_liouville(&grid, &data, &opts)?;
        if n == 0 || iterations == RING_FIT_ITERATIONS {
            return Ok(field);
        }
        let g = pack(&fit_rings(domain, &field.grid, &field.u, &fits));
        let f: Vec<f64> = g.iter().zip(&x).map(|(g, x)| g - x).collect();
        if f.iter().step_by(3).all(|v| v.abs() < RING_FIT_TOLERANCE) {
            return Ok(field);
        }
        history.push((g, f));
        if history.len() > ANDERSON_DEPTH + 1 {
            history.remove(0);
        }
        x = anderson(&history);
        init = field.u;
        iterations += 1;
    }
}

/// Anderson mixing over stored (g(x_k), g(x_k) − x_k) pairs: the affine
/// combination of the g values whose residual combination has least norm.
fn anderson(history: &[(Vec<f64>, Vec<f64>)]) -> Vec<f64> {
    let (g, f) = history.last().expect("nonempty history");
    let m = history.len() - 1;
    if m == 0 {
        return g.clone();
    }
    let df: Vec<Vec<f64>> = (0..m)
        .map(|j| f.iter().zip(&history[j].1).map(|(a, b)| a - b).collect())
        .collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let gram: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| dot(&df[i], &df[j])).collect())
        .collect();
    let rhs: Vec<f64> = (0..m).map(|i| dot(&df[i], f)).collect();
    let Some(gamma) = crate::solver::boundary::solve_dense(gram, rhs) else {
        return g.clone();
    };
    let mut x = g.clone();
    for (j, c) in gamma.iter().enumerate() {
        for (k, v) in x.iter_mut().enumerate() {
            *v -= c * (g[k] - history[j].0[k]);
        }
    }
    x
}

const ANDERSON_DEPTH: usize = 5;

/// Cap and stopping threshold (on log R) for the puncture radius fit.
pub const RING_FIT_ITERATIONS: usize = 20;
pub const RING_FIT_TOLERANCE: f64 = 1e-3;
