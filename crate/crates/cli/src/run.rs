use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use poincare::capacity::pcap_in_window;
use poincare::catalog::{curvature_residual, resolve};
use poincare::geometry::{compact_to_json, parse_compact, parse_region, region_to_json};
use poincare::grid::Chart;
use poincare::solver::{extrapolate, solve_domain, Level, LogDensityField};
use poincare::verify::{
    boundary_ratio, radial_approach, verify_capacity_submult, verify_theorem1_with_densities,
    verify_weak_constant, DensityEval, Mode, PdeOptions,
};
use poincare::{BBox, ClosedFormMetric, CompactSpec, Point, RegionSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::QueryPoint;
use crate::config::{
    BoundaryRatioArgs, ChartArg, CheckKind, CurvatureArgs, DensityArgs, JobConfig, PcapArgs,
    VerifyArgs,
};

/// Result of one job: the report and whether the checked property held.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

/// Curvature-check order window for curvature −1 metrics.
pub const ORDER_RANGE: (f64, f64) = (1.8, 2.2);

/// Below this the residual is rounding noise and no order can be fitted.
const NEGLIGIBLE_RESIDUAL: f64 = 1e-8;

pub fn run(config: &JobConfig) -> Result<Outcome> {
    let (mut fields, passed) = match config {
        JobConfig::Density(a) => density(a)?,
        JobConfig::Pcap(a) => pcap(a)?,
        JobConfig::Verify(a) => verify(a)?,
        JobConfig::BoundaryRatio(a) => boundary(a)?,
        JobConfig::CurvatureCheck(a) => curvature(a)?,
    };
    let mut report = Map::new();
    report.insert("version".into(), json!(poincare::VERSION));
    report.insert("config".into(), serde_json::to_value(config)?);
    report.append(&mut fields);
    report.insert("passed".into(), json!(passed));
    Ok(Outcome {
        report: Value::Object(report),
        passed,
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_region(path: &Path) -> Result<RegionSpec> {
    let r =
        parse_region(&read(path)?).with_context(|| format!("parsing region {}", path.display()))?;
    r.validate()
        .with_context(|| format!("region {}", path.display()))?;
    Ok(r)
}

fn read_compact(path: &Path) -> Result<CompactSpec> {
    parse_compact(&read(path)?).with_context(|| format!("parsing compact set {}", path.display()))
}

fn object<T: Serialize>(v: &T) -> Result<Map<String, Value>> {
    match serde_json::to_value(v)? {
        Value::Object(m) => Ok(m),
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            Ok(m)
        }
    }
}

fn write_field(field: &LogDensityField, path: &Path) -> Result<()> {
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    field
        .write_csv(std::io::BufWriter::new(file))
        .with_context(|| format!("writing {}", path.display()))
}

fn closed_form_values(metric: &ClosedFormMetric, points: &[QueryPoint]) -> Result<Vec<f64>> {
    points
        .iter()
        .map(|q| match q {
            QueryPoint::Finite(z) => Ok(metric.density(*z)?),
            QueryPoint::Infinity => bail!("closed forms are evaluated at finite points only"),
        })
        .collect()
}

fn field_value(field: &LogDensityField, q: QueryPoint) -> Result<f64> {
    Ok(match q {
        QueryPoint::Finite(z) => field.density_at(z)?,
        QueryPoint::Infinity => field.density_at_infinity()?,
    })
}

fn density_report(
    points: &[QueryPoint],
    values: &[f64],
    mut extra: Map<String, Value>,
) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("lambda".into(), json!(values[0]));
    m.insert(
        "values".into(),
        Value::Array(
            points
                .iter()
                .zip(values)
                .map(|(p, v)| json!({ "point": p, "lambda": v }))
                .collect(),
        ),
    );
    m.append(&mut extra);
    m
}

fn density(a: &DensityArgs) -> Result<(Map<String, Value>, bool)> {
    let closed = |metric: ClosedFormMetric| -> Result<(Map<String, Value>, bool)> {
        let values = closed_form_values(&metric, &a.point)?;
        let extra = object(&json!({ "source": "closed-form", "metric": metric.to_string() }))?;
        Ok((density_report(&a.point, &values, extra), true))
    };
    let region = match (&a.catalog, &a.region) {
        (Some(tag), _) => return closed(tag.parse()?),
        (None, Some(path)) => read_region(path)?,
        (None, None) => bail!("one of --region or --catalog is required"),
    };
    let mode = Mode::from(a.mode);
    if mode != Mode::Pde {
        match resolve(&region) {
            Some(metric) => return closed(metric),
            None if mode == Mode::Oracle => bail!(poincare::Error::UnsupportedOracle(
                "the region has no closed-form density".into()
            )),
            None => {}
        }
    }
    let chart = match a.chart {
        Some(ChartArg::Identity) => Chart::Identity,
        Some(ChartArg::Inversion) => Chart::Inversion {
            center: a.center.unwrap_or(Point::ORIGIN),
        },
        None if region.bounding_box().is_some() => Chart::Identity,
        None => Chart::Inversion {
            center: a.center.unwrap_or(Point::ORIGIN),
        },
    };
    let spacings: Vec<f64> = match &a.levels {
        Some(l) if l.len() < 3 => bail!("--levels needs at least three spacings"),
        Some(l) => l.0.clone(),
        None => vec![a.h],
    };
    let coarsest = spacings[0];
    let bbox = match (a.bbox, chart) {
        (Some(b), _) => b,
        (None, Chart::Identity) => region
            .bounding_box()
            .context("unbounded region in the identity chart needs --bbox")?
            .expand(4.0 * coarsest),
        (None, Chart::Inversion { .. }) => bail!("the inversion chart needs an explicit --bbox"),
    };
    let mut per_level: Vec<Vec<f64>> = Vec::new();
    let mut finest = None;
    for &h in &spacings {
        let field = solve_domain(&region, chart, bbox, h)?;
        per_level.push(
            a.point
                .iter()
                .map(|&q| field_value(&field, q))
                .collect::<Result<_>>()?,
        );
        finest = Some(field);
    }
    let finest = finest.expect("at least one spacing");
    if let Some(path) = &a.dump_field {
        write_field(&finest, path)?;
    }
    let mut extra = object(&json!({
        "source": "pde",
        "chart": chart,
        "bbox": bbox,
        "region": region_to_json(&region),
    }))?;
    let values: Vec<f64> = if spacings.len() == 1 {
        extra.insert("h".into(), json!(a.h));
        per_level.pop().expect("one level")
    } else {
        let reports = (0..a.point.len())
            .map(|i| {
                let levels = spacings
                    .iter()
                    .zip(&per_level)
                    .map(|(&h, v)| Level { h, value: v[i] })
                    .collect();
                Ok(extrapolate(levels)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let values = reports.iter().map(|r| r.extrapolated).collect();
        extra.insert("refinement".into(), serde_json::to_value(&reports)?);
        values
    };
    Ok((density_report(&a.point, &values, extra), true))
}

fn pcap(a: &PcapArgs) -> Result<(Map<String, Value>, bool)> {
    let k = read_compact(&a.compact)?;
    let report = pcap_in_window(&k, &a.levels, a.bbox)?;
    let mut m = object(&report)?;
    m.insert("compact".into(), compact_to_json(&k));
    Ok((m, true))
}

fn pde_options(h: f64, bbox: Option<BBox>, window: Option<BBox>, seed: u64) -> PdeOptions {
    PdeOptions {
        h,
        bbox,
        sample_window: window,
        seed,
    }
}

const FIELD_NAMES: [&str; 4] = ["omega1", "omega2", "union", "intersection"];

fn verify(a: &VerifyArgs) -> Result<(Map<String, Value>, bool)> {
    let opts = pde_options(a.h, a.bbox, a.window, a.seed);
    let regions = || -> Result<(RegionSpec, RegionSpec)> {
        match (&a.region1, &a.region2) {
            (Some(r1), Some(r2)) => Ok((read_region(r1)?, read_region(r2)?)),
            _ => bail!("the {:?} check needs --region1 and --region2", a.check),
        }
    };
    match a.check {
        CheckKind::Theorem => {
            let (r1, r2) = regions()?;
            let (report, evals) =
                verify_theorem1_with_densities(&r1, &r2, a.samples, a.tol, a.mode.into(), &opts)?;
            let mut m = object(&report)?;
            if let Some(dir) = &a.dump_field {
                m.insert("dumped".into(), json!(dump_fields(dir, &evals)?));
            }
            Ok((m, report.passed))
        }
        CheckKind::Weak => {
            let (r1, r2) = regions()?;
            let report = verify_weak_constant(&r1, &r2, a.samples, a.tol, a.mode.into(), &opts)?;
            let passed = report.curvature_ok && report.inequality_ok;
            Ok((object(&report)?, passed))
        }
        CheckKind::Capacity => {
            let (Some(c1), Some(c2)) = (&a.compact1, &a.compact2) else {
                bail!("the capacity check needs --compact1 and --compact2");
            };
            let report =
                verify_capacity_submult(&read_compact(c1)?, &read_compact(c2)?, &a.levels, a.tol)?;
            Ok((object(&report)?, report.holds))
        }
    }
}

/// Writes one CSV per solved field; closed-form densities have no grid.
fn dump_fields(dir: &Path, evals: &[DensityEval]) -> Result<Vec<String>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    for (name, e) in FIELD_NAMES.iter().zip(evals) {
        if let Some(f) = e.field() {
            let path = dir.join(format!("{name}.csv"));
            write_field(f, &path)?;
            written.push(path.display().to_string());
        }
    }
    Ok(written)
}

fn boundary(a: &BoundaryRatioArgs) -> Result<(Map<String, Value>, bool)> {
    let omega = read_region(&a.omega)?;
    let u = read_region(&a.u)?;
    let opts = pde_options(a.h, a.bbox, None, poincare::verify::DEFAULT_SEED);
    let pts = radial_approach(a.xi, a.toward, &a.distances)?;
    let ratios = boundary_ratio(&omega, &u, a.xi, &pts, a.mode.into(), &opts)?;
    let samples: Vec<Value> = a
        .distances
        .iter()
        .zip(&pts)
        .zip(&ratios)
        .map(|((d, p), r)| json!({ "distance": d, "point": p, "ratio": r }))
        .collect();
    Ok((object(&json!({ "samples": samples }))?, true))
}

#[derive(Serialize)]
struct CurvatureLevel {
    h: f64,
    /// Largest |Δ_h log λ − λ² + (1 + K)λ²| over the samples.
    max_residual: f64,
}

fn curvature(a: &CurvatureArgs) -> Result<(Map<String, Value>, bool)> {
    let metric: ClosedFormMetric = a.catalog.parse()?;
    metric.validate()?;
    let k = metric.curvature();
    let deviation = |z: Point, h: f64| -> poincare::Result<f64> {
        let r = curvature_residual(|w| metric.density(w), z, h)?;
        let l = metric.density(z)?;
        Ok(r + (1.0 + k) * l * l)
    };
    let usable = |z: Point| {
        a.levels
            .iter()
            .all(|&h| deviation(z, h).map_or(false, f64::is_finite))
    };
    let points: Vec<Point> = if a.point.is_empty() {
        let w = a
            .window
            .context("--window is required when no --point is given")?;
        if a.samples == 0 {
            bail!("--samples must be positive");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        let mut out = Vec::with_capacity(a.samples);
        let mut tries = 0usize;
        while out.len() < a.samples {
            tries += 1;
            if tries > 1000 * a.samples {
                bail!(poincare::Error::NoSamples(format!(
                    "found {} of {} usable points in the window",
                    out.len(),
                    a.samples
                )));
            }
            let z = Point::new(rng.gen_range(w.xmin..w.xmax), rng.gen_range(w.ymin..w.ymax));
            if usable(z) {
                out.push(z);
            }
        }
        out
    } else {
        if let Some(z) = a.point.iter().find(|&&z| !usable(z)) {
            bail!(poincare::Error::Domain {
                x: z.x,
                y: z.y,
                reason: "the stencil leaves the metric's domain".into()
            });
        }
        a.point.clone()
    };
    let levels = a
        .levels
        .iter()
        .map(|&h| {
            let m = points
                .iter()
                .map(|&z| deviation(z, h).map(f64::abs))
                .collect::<poincare::Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok(CurvatureLevel { h, max_residual: m })
        })
        .collect::<Result<Vec<_>>>()?;
    let finest = levels.last().map_or(0.0, |l| l.max_residual);
    let order = (levels.len() >= 2 && finest > NEGLIGIBLE_RESIDUAL).then(|| {
        let x: Vec<f64> = levels.iter().map(|l| l.h).collect();
        let y: Vec<f64> = levels.iter().map(|l| l.max_residual).collect();
        loglog_slope(&x, &y)
    });
    let passed = match order {
        Some(p) => (ORDER_RANGE.0..=ORDER_RANGE.1).contains(&p),
        None => finest <= NEGLIGIBLE_RESIDUAL,
    };
    let m = object(&json!({
        "metric": metric.to_string(),
        "curvature": k,
        "levels": levels,
        "order": order,
        "order_range": [ORDER_RANGE.0, ORDER_RANGE.1],
        "points": points,
    }))?;
    Ok((m, passed))
}

/// Least-squares slope of log y against log x; zero values are skipped.
fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(_, &v)| v > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = pts.iter().map(|(a, _)| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
