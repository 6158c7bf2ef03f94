use std::collections::VecDeque;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::RegionSpec;
use crate::point::{BBox, Point};
use crate::verify::eval::{evaluators, DensityEval, Mode, PdeOptions};

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Samples stay this many grid spacings away from every boundary.
const SAMPLE_CLEARANCE: f64 = 4.0;

/// Lattice resolution of the nestedness check (nodes per window side).
const NEST_RESOLUTION: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub point: Point,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda_union: f64,
    pub lambda_intersection: f64,
    pub ratio: f64,
}

impl Sample {
    fn new(point: Point, l: [f64; 4]) -> Sample {
        Sample {
            point,
            lambda1: l[0],
            lambda2: l[1],
            lambda_union: l[2],
            lambda_intersection: l[3],
            ratio: ratio(l),
        }
    }
}

fn ratio(l: [f64; 4]) -> f64 {
    (l[0] * l[1]) / (l[2] * l[3])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub samples: Vec<Sample>,
    pub min_ratio: f64,
    pub max_deviation: f64,
    pub equality_detected: bool,
    pub passed: bool,
    pub tolerance: f64,
    pub mode: Mode,
    /// Grid spacing used for sampling (and solving in pde/mixed mode).
    pub h: f64,
    pub sample_window: BBox,
    /// Shared solve window, when any region was solved.
    pub bbox: Option<BBox>,
    pub seed: u64,
}

impl VerificationReport {
    /// Checks that every stored ratio is the quotient of its densities.
    pub fn check_consistency(&self) -> Result<()> {
        for s in &self.samples {
            let r = ratio([s.lambda1, s.lambda2, s.lambda_union, s.lambda_intersection]);
            if (r - s.ratio).abs() > 1e-12 * r.abs().max(1.0) {
                return Err(Error::InvariantViolation(format!(
                    "stored ratio {} differs from recomputed {r}",
                    s.ratio
                )));
            }
        }
        Ok(())
    }
}

pub(crate) struct Quad {
    pub o1: RegionSpec,
    pub o2: RegionSpec,
    pub union: RegionSpec,
    pub inter: RegionSpec,
}

impl Quad {
    pub(crate) fn new(o1: &RegionSpec, o2: &RegionSpec) -> Result<Quad> {
        o1.validate()?;
        o2.validate()?;
        let union = RegionSpec::union(vec![o1.clone(), o2.clone()]);
        if !union.is_hyperbolic()? {
            return Err(Error::Precondition(
                "the union of the two regions is not hyperbolic".into(),
            ));
        }
        Ok(Quad {
            o1: o1.clone(),
            o2: o2.clone(),
            union,
            inter: RegionSpec::intersection(vec![o1.clone(), o2.clone()]),
        })
    }

    pub(crate) fn all(&self) -> [&RegionSpec; 4] {
        [&self.o1, &self.o2, &self.union, &self.inter]
    }
}

pub(crate) fn densities(evals: &[DensityEval], z: Point) -> Result<[f64; 4]> {
    let mut l = [0.0; 4];
    for (v, e) in l.iter_mut().zip(evals) {
        *v = e.density(z)?;
    }
    Ok(l)
}

/// λ₁(z)λ₂(z) / (λ_∪(z)λ_∩(z)) for z in both regions.
pub fn submult_ratio(
    o1: &RegionSpec,
    o2: &RegionSpec,
    z: Point,
    mode: Mode,
    opts: &PdeOptions,
) -> Result<f64> {
    let quad = Quad::new(o1, o2)?;
    if !quad.inter.is_member(z) {
        return Err(Error::domain(
            z,
            "not in the intersection of the two regions",
        ));
    }
    let evals = evaluators(&quad.all(), mode, opts)?;
    Ok(ratio(densities(&evals, z)?))
}

/// Window for drawing samples from `region`.
pub(crate) fn sample_window(region: &RegionSpec, opts: &PdeOptions) -> BBox {
    opts.sample_window
        .or_else(|| region.bounding_box())
        .unwrap_or_else(|| BBox::square(4.0))
}

/// Up to `count` lattice points (multiples of `h`, so grid nodes in pde
/// mode) of `window` inside `region` at distance ≥ 4h from its boundary,
/// chosen uniformly without replacement and returned in raster order.
pub(crate) fn draw_samples(
    region: &RegionSpec,
    window: BBox,
    h: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<Point>> {
    let (i0, i1) = (
        (window.xmin / h).ceil() as i64,
        (window.xmax / h).floor() as i64,
    );
    let (j0, j1) = (
        (window.ymin / h).ceil() as i64,
        (window.ymax / h).floor() as i64,
    );
    let mut cands = Vec::new();
    for j in j0..=j1 {
        for i in i0..=i1 {
            let p = Point::new(i as f64 * h, j as f64 * h);
            if -region.sdf(p) >= SAMPLE_CLEARANCE * h {
                cands.push(p);
            }
        }
    }
    if cands.is_empty() {
        return Err(Error::NoSamples(format!(
            "no lattice point of spacing {h} lies {SAMPLE_CLEARANCE}h inside the intersection"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, cands.len(), count.min(cands.len())).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|k| cands[k]).collect())
}

/// Whether the component of Ω₁ containing `z` lies in Ω₂ or the component
/// of Ω₂ containing `z` lies in Ω₁, judged on a lattice over `window`.
pub fn components_nested(o1: &RegionSpec, o2: &RegionSpec, z: Point, window: BBox) -> bool {
    let inside = |a: &RegionSpec, b: &RegionSpec| {
        lattice_component(a, z, window)
            .iter()
            .all(|p| b.is_member(*p))
    };
    inside(o1, o2) || inside(o2, o1)
}

fn lattice_component(region: &RegionSpec, z: Point, window: BBox) -> Vec<Point> {
    let n = NEST_RESOLUTION;
    let s = (window.xmax - window.xmin).max(window.ymax - window.ymin) / n as f64;
    let nx = ((window.xmax - window.xmin) / s).round() as usize + 1;
    let ny = ((window.ymax - window.ymin) / s).round() as usize + 1;
    let at =
        |i: usize, j: usize| Point::new(window.xmin + i as f64 * s, window.ymin + j as f64 * s);
    let seed_i = (((z.x - window.xmin) / s).round().max(0.0) as usize).min(nx - 1);
    let seed_j = (((z.y - window.ymin) / s).round().max(0.0) as usize).min(ny - 1);
    let mut seen = vec![false; nx * ny];
    let mut out = vec![z];
    let mut queue = VecDeque::new();
    if region.is_member(at(seed_i, seed_j)) {
        seen[seed_j * nx + seed_i] = true;
        queue.push_back((seed_i, seed_j));
    }
    while let Some((i, j)) = queue.pop_front() {
        out.push(at(i, j));
        let nbrs = [
            (i.wrapping_sub(1), j),
            (i + 1, j),
            (i, j.wrapping_sub(1)),
            (i, j + 1),
        ];
        for (a, b) in nbrs {
            if a < nx && b < ny && !seen[b * nx + a] && region.is_member(at(a, b)) {
                seen[b * nx + a] = true;
                queue.push_back((a, b));
            }
        }
    }
    out
}

/// Checks λ₁λ₂ ≥ λ_∪λ_∩ at `sample_count` points of Ω₁∩Ω₂.
///
/// Passes iff min ratio ≥ 1 − tol. Equality is reported when every ratio is
/// within tol of 1 and the components through the first sample are nested.
pub fn verify_theorem1(
    o1: &RegionSpec,
    o2: &RegionSpec,
    sample_count: usize,
    tol: f64,
    mode: Mode,
    opts: &PdeOptions,
) -> Result<VerificationReport> {
    verify_theorem1_with_densities(o1, o2, sample_count, tol, mode, opts).map(|(r, _)| r)
}

/// As [`verify_theorem1`], also returning the densities of Ω₁, Ω₂, Ω₁∪Ω₂
/// and Ω₁∩Ω₂ in that order.
pub fn verify_theorem1_with_densities(
    o1: &RegionSpec,
    o2: &RegionSpec,
    sample_count: usize,
    tol: f64,
    mode: Mode,
    opts: &PdeOptions,
) -> Result<(VerificationReport, Vec<DensityEval>)> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be nonnegative, got {tol}"
        )));
    }
    if sample_count == 0 {
        return Err(Error::InvalidInput("sample count must be positive".into()));
    }
    let quad = Quad::new(o1, o2)?;
    let window = sample_window(&quad.inter, opts);
    let points = draw_samples(&quad.inter, window, opts.h, sample_count, opts.seed)?;
    let evals = evaluators(&quad.all(), mode, opts)?;
    let samples = points
        .iter()
        .map(|&z| Ok(Sample::new(z, densities(&evals, z)?)))
        .collect::<Result<Vec<_>>>()?;
    let min_ratio = samples
        .iter()
        .map(|s| s.ratio)
        .fold(f64::INFINITY, f64::min);
    let max_deviation = samples
        .iter()
        .map(|s| (s.ratio - 1.0).abs())
        .fold(0.0, f64::max);
    let nest_window = quad.union.bounding_box().unwrap_or(window).union(&window);
    let equality_detected =
        max_deviation <= tol && components_nested(o1, o2, points[0], nest_window);
    let report = VerificationReport {
        min_ratio,
        max_deviation,
        equality_detected,
        passed: min_ratio >= 1.0 - tol,
        tolerance: tol,
        mode,
        h: opts.h,
        sample_window: window,
        bbox: evals.iter().find_map(|e| e.field().map(|f| f.grid.bbox())),
        seed: opts.seed,
        samples,
    };
    Ok((report, evals))
}
