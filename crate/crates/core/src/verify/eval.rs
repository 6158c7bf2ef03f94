use serde::Serialize;

use crate::catalog::{resolve, ClosedFormMetric};
use crate::error::{Error, Result};
use crate::geometry::RegionSpec;
use crate::grid::Chart;
use crate::point::{BBox, Point};
use crate::solver::{solve_domain, LogDensityField};

/// Where densities come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Catalog closed forms only.
    Oracle,
    /// Finite-difference solves only, all on one shared grid.
    Pde,
    /// Closed forms where the region resolves, solves otherwise.
    Mixed,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "oracle" => Ok(Mode::Oracle),
            "pde" => Ok(Mode::Pde),
            "mixed" => Ok(Mode::Mixed),
            _ => Err(Error::Parse(format!(
                "unknown mode {s:?} (expected oracle, pde or mixed)"
            ))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Oracle => "oracle",
            Mode::Pde => "pde",
            Mode::Mixed => "mixed",
        })
    }
}

/// Grid settings shared by the solves of one verification job.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PdeOptions {
    pub h: f64,
    /// Solve window; defaults to the union's bounding box plus a margin.
    pub bbox: Option<BBox>,
    /// Window for drawing samples when the regions are unbounded.
    pub sample_window: Option<BBox>,
    pub seed: u64,
}

impl Default for PdeOptions {
    fn default() -> Self {
        PdeOptions {
            h: 1.0 / 64.0,
            bbox: None,
            sample_window: None,
            seed: crate::verify::DEFAULT_SEED,
        }
    }
}

/// A density λ_Ω available pointwise.
#[derive(Debug, Clone)]
pub enum DensityEval {
    ClosedForm(ClosedFormMetric),
    Field(Box<LogDensityField>),
}

impl DensityEval {
    pub fn density(&self, z: Point) -> Result<f64> {
        match self {
            DensityEval::ClosedForm(m) => m.density(z),
            DensityEval::Field(f) => f.density_at(z),
        }
    }

    pub fn field(&self) -> Option<&LogDensityField> {
        match self {
            DensityEval::Field(f) => Some(f),
            DensityEval::ClosedForm(_) => None,
        }
    }
}

/// Shared identity-chart window for solving all of `regions`.
pub(crate) fn shared_window(regions: &[&RegionSpec], opts: &PdeOptions) -> Result<BBox> {
    if let Some(b) = opts.bbox {
        return Ok(b);
    }
    regions
        .iter()
        .map(|r| {
            r.bounding_box().ok_or_else(|| {
                Error::Precondition("pde mode needs bounded regions or an explicit bbox".into())
            })
        })
        .try_fold(None::<BBox>, |acc, b| {
            let b = b?;
            Ok::<_, Error>(Some(acc.map_or(b, |a| a.union(&b))))
        })?
        .map(|b| b.expand(4.0 * opts.h))
        .ok_or_else(|| Error::Precondition("no regions to solve".into()))
}

/// Densities of `regions` in `mode`, solving where needed on one shared
/// grid so that discretization bias partly cancels in quotients.
pub(crate) fn evaluators(
    regions: &[&RegionSpec],
    mode: Mode,
    opts: &PdeOptions,
) -> Result<Vec<DensityEval>> {
    use rayon::prelude::*;
    let closed: Vec<Option<ClosedFormMetric>> = regions
        .iter()
        .map(|r| if mode == Mode::Pde { None } else { resolve(r) })
        .collect();
    if mode == Mode::Oracle {
        if let Some(i) = closed.iter().position(Option::is_none) {
            return Err(Error::UnsupportedOracle(format!(
                "region {} has no closed-form density",
                i + 1
            )));
        }
    }
    let to_solve: Vec<&RegionSpec> = regions
        .iter()
        .zip(&closed)
        .filter(|(_, c)| c.is_none())
        .map(|(r, _)| *r)
        .collect();
    let bbox = if to_solve.is_empty() {
        None
    } else {
        Some(shared_window(&to_solve, opts)?)
    };
    regions
        .par_iter()
        .zip(closed.into_par_iter())
        .map(|(r, c)| match c {
            Some(m) => Ok(DensityEval::ClosedForm(m)),
            None => {
                let bbox = bbox.expect("window computed for solved regions");
                Ok(DensityEval::Field(Box::new(solve_domain(
                    *r,
                    Chart::Identity,
                    bbox,
                    opts.h,
                )?)))
            }
        })
        .collect()
}
