//! Acceptance checks, one line per criterion. Runs as a plain binary so the
//! lines are printed without `--nocapture`; exits nonzero if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use poincare::capacity::pcap;
use poincare::catalog::{curvature_residual, resolve};
use poincare::grid::{Chart, Domain};
use poincare::solver::{exhaustion, refine_and_extrapolate, solve_domain, Query};
use poincare::verify::{
    boundary_ratio, radial_approach, submult_ratio, verify_capacity_submult, verify_theorem1,
    verify_weak_constant, Mode, PdeOptions, WEAK_CONSTANT,
};
use poincare::{BBox, ClosedFormMetric, CompactSpec, Point, RegionSpec};

type Check = Result<(bool, String), String>;

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion {
            name: "catalog curvature order",
            budget: Duration::from_secs(10),
            run: catalog_curvature,
        },
        Criterion {
            name: "disk solve accuracy",
            budget: Duration::from_secs(60),
            run: disk_solve,
        },
        Criterion {
            name: "pcap reproduction",
            budget: Duration::from_secs(300),
            run: pcap_reproduction,
        },
        Criterion {
            name: "submultiplicativity, oracle mode",
            budget: Duration::from_secs(5),
            run: theorem_oracle,
        },
        Criterion {
            name: "submultiplicativity, pde mode",
            budget: Duration::from_secs(600),
            run: theorem_pde,
        },
        Criterion {
            name: "weak constant",
            budget: Duration::from_secs(60),
            run: weak_constant,
        },
        Criterion {
            name: "exhaustion",
            budget: Duration::from_secs(120),
            run: exhaustion_check,
        },
        Criterion {
            name: "boundary ratio",
            budget: Duration::from_secs(10),
            run: boundary_ratio_check,
        },
        Criterion {
            name: "capacity submultiplicativity",
            budget: Duration::from_secs(300),
            run: capacity_submult,
        },
        Criterion {
            name: "monotonicity suite",
            budget: Duration::from_secs(120),
            run: monotonicity,
        },
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for c in &criteria {
        if !filter.is_empty() && !filter.iter().any(|f| c.name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok((ok, d)) => (ok, d),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = elapsed <= c.budget;
        let pass = ok && in_time;
        if !pass {
            failed += 1;
        }
        let timing = if in_time {
            format!("{:.1} s", elapsed.as_secs_f64())
        } else {
            format!(
                "{:.1} s, over the {} s budget",
                elapsed.as_secs_f64(),
                c.budget.as_secs()
            )
        };
        println!(
            "{} {}: {detail} ({timing})",
            if pass { "PASS" } else { "FAIL" },
            c.name
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

/// Least-squares slope of log y against log x.
fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn rejection_sample(
    rng: &mut ChaCha8Rng,
    n: usize,
    bbox: BBox,
    keep: impl Fn(Point) -> bool,
) -> Vec<Point> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let z = p(
            rng.gen_range(bbox.xmin..bbox.xmax),
            rng.gen_range(bbox.ymin..bbox.ymax),
        );
        if keep(z) {
            out.push(z);
        }
    }
    out
}

fn catalog_curvature() -> Check {
    let lens = RegionSpec::intersection(vec![
        RegionSpec::disk(p(-0.5, 0.0), 1.0),
        RegionSpec::disk(p(0.5, 0.0), 1.0),
    ]);
    let arg_within = |z: Point, half: f64| z.y.atan2(z.x).abs() < half;
    let fixtures: Vec<(ClosedFormMetric, BBox, Box<dyn Fn(Point) -> bool>)> = vec![
        (
            "unitdisk".parse().map_err(e2s)?,
            BBox::square(0.8),
            Box::new(|z: Point| z.norm() < 0.8),
        ),
        (
            "disk:1,-1,2".parse().map_err(e2s)?,
            BBox::new(-0.6, 2.6, -2.6, 0.6),
            Box::new(|z: Point| z.dist(p(1.0, -1.0)) < 1.6),
        ),
        (
            "halfplane:0,1,0,1".parse().map_err(e2s)?,
            BBox::new(-2.0, 2.0, 1.3, 3.0),
            Box::new(|_| true),
        ),
        (
            "exteriordisk:0,0,1".parse().map_err(e2s)?,
            BBox::square(3.0),
            Box::new(|z: Point| z.norm() > 1.3 && z.norm() < 3.0),
        ),
        (
            "punctureddisk:0,0,1".parse().map_err(e2s)?,
            BBox::square(0.75),
            Box::new(|z: Point| z.norm() > 0.25 && z.norm() < 0.75),
        ),
        (
            "annulus:0,0,1,3".parse().map_err(e2s)?,
            BBox::square(2.6),
            Box::new(|z: Point| z.norm() > 1.4 && z.norm() < 2.6),
        ),
        (
            format!("wedge:0,0,0,{}", 2.0 * PI / 3.0)
                .parse()
                .map_err(e2s)?,
            BBox::new(0.0, 2.0, -2.0, 2.0),
            Box::new(move |z: Point| z.norm() > 0.5 && z.norm() < 2.0 && arg_within(z, PI / 6.0)),
        ),
        (
            format!("wedge:0,0,0,{}", 1.5 * PI).parse().map_err(e2s)?,
            BBox::square(2.0),
            Box::new(move |z: Point| z.norm() > 0.5 && z.norm() < 2.0 && arg_within(z, PI / 2.0)),
        ),
        (
            resolve(&lens).ok_or("lens did not resolve")?,
            BBox::square(0.3),
            Box::new(|z: Point| z.norm() < 0.3),
        ),
    ];
    let hs = [1e-2, 5e-3, 2.5e-3];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: (f64, String) = (0.0, String::new());
    let mut ok = true;
    for (metric, bbox, keep) in &fixtures {
        let pts = rejection_sample(&mut rng, 100, *bbox, keep);
        let mut maxima = Vec::new();
        for &h in &hs {
            let mut m: f64 = 0.0;
            for &z in &pts {
                let r = curvature_residual(|w| metric.density(w), z, h).map_err(e2s)?;
                m = m.max(r.abs());
            }
            maxima.push(m);
        }
        let order = loglog_slope(&hs, &maxima);
        if !(1.8..=2.2).contains(&order) {
            ok = false;
        }
        let dev = (order - 2.0).abs();
        if dev >= worst.0 || worst.1.is_empty() {
            worst = (dev, format!("{metric} order {order:.4}"));
        }
    }
    Ok((
        ok,
        format!(
            "{} metrics, orders in [1.8, 2.2]; farthest from 2: {}",
            fixtures.len(),
            worst.1
        ),
    ))
}

fn disk_solve() -> Check {
    let disk = RegionSpec::unit_disk();
    let field =
        solve_domain(&disk, Chart::Identity, BBox::square(1.1), 1.0 / 128.0).map_err(e2s)?;
    let mut sup: f64 = 0.0;
    for k in 0..field.grid.len() {
        let z = field.grid.node(k);
        if z.norm() <= 0.9 {
            let exact = 2.0 / (1.0 - z.norm_sqr());
            let got = field.density_at(z).map_err(e2s)?;
            sup = sup.max((got - exact).abs() / exact);
        }
    }
    let rep = refine_and_extrapolate(
        &disk,
        Chart::Identity,
        BBox::square(1.1),
        Query::Point(Point::ORIGIN),
        &[1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0],
    )
    .map_err(e2s)?;
    let order = rep.order.unwrap_or(f64::NAN);
    Ok((
        sup <= 1e-2 && order >= 1.5,
        format!("sup rel error {sup:.3e} on |z| <= 0.9 at h = 1/128 (limit 1e-2); order at 0 {order:.3} (limit 1.5)"),
    ))
}

/// Complete elliptic integral K(m) = π / (2 AGM(1, sqrt(1 − m))) for complex
/// m, taking at each step the root closer to the arithmetic mean.
fn ellip_k(m: Complex64) -> Complex64 {
    let (mut a, mut b) = (
        Complex64::new(1.0, 0.0),
        (Complex64::new(1.0, 0.0) - m).sqrt(),
    );
    for _ in 0..60 {
        let an = (a + b) * 0.5;
        let mut bn = (a * b).sqrt();
        if (an - bn).norm() > (an + bn).norm() {
            bn = -bn;
        }
        a = an;
        b = bn;
    }
    Complex64::new(PI, 0.0) / (a * 2.0)
}

/// Density of C \ {0, 1} from the elliptic modular function:
/// λ(z) = π / (4 |z(1 − z)| Re(K(1 − z) conj K(z))).
fn lambda_01(z: Complex64) -> f64 {
    let k = ellip_k(z);
    let kp = ellip_k(Complex64::new(1.0, 0.0) - z);
    PI / (4.0 * (z * (Complex64::new(1.0, 0.0) - z)).norm() * (kp * k.conj()).re)
}

fn pcap_reproduction() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in [0.5, 1.0, 2.0] {
        let k = CompactSpec::disk(p(0.3, -0.2), r);
        let hs = [1.0 / (32.0 * r), 1.0 / (64.0 * r), 1.0 / (128.0 * r)];
        let rep = pcap(&k, &hs).map_err(e2s)?;
        let err = (rep.extrapolated - r).abs() / r;
        ok &= err <= 0.02;
        parts.push(format!(
            "disk r={r}: {:.6} (rel {err:.1e})",
            rep.extrapolated
        ));
    }
    let seg = pcap(
        &CompactSpec::segment(p(-2.0, 0.0), p(2.0, 0.0)),
        &[1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0],
    )
    .map_err(e2s)?;
    let err = (seg.extrapolated - 1.0).abs();
    ok &= err <= 0.05;
    parts.push(format!("[-2,2]: {:.6} (rel {err:.1e})", seg.extrapolated));

    let two = pcap(
        &CompactSpec::points(vec![p(-1.0, 0.0), p(1.0, 0.0)]),
        &[0.1, 0.05, 0.025],
    )
    .map_err(e2s)?;
    ok &= two.pcap == 0.0;
    parts.push(format!("two points: {}", two.pcap));

    let three = pcap(
        &CompactSpec::points(vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)]),
        &[1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0],
    )
    .map_err(e2s)?;
    let n = three.levels.len();
    let (a, b) = (three.levels[n - 2].value, three.levels[n - 1].value);
    let drift = (a - b).abs() / b;
    ok &= b > 0.01 && drift <= 0.1;
    // The Moebius map z -> z(1 - i)/(z - i) sends {0, 1, i} to {0, 1, ∞} and
    // ∞ to 1 − i with |T'(z)| |z|^2 -> sqrt 2, so pcap = λ_01(1 − i)/sqrt 2.
    let exact = lambda_01(Complex64::new(1.0, -1.0)) / 2f64.sqrt();
    parts.push(format!(
        "{{0,1,i}}: finest {b:.5}, drift {drift:.3} (limit 0.1), extrapolated {:.5} vs modular-function value {exact:.5}",
        three.extrapolated
    ));
    Ok((ok, parts.join("; ")))
}

fn theorem_oracle() -> Check {
    let opts = PdeOptions {
        sample_window: Some(BBox::square(4.0)),
        ..PdeOptions::default()
    };
    let upper = RegionSpec::half_plane(p(0.0, 0.0), p(0.0, 1.0));
    let right = RegionSpec::half_plane(p(0.0, 0.0), p(1.0, 0.0));
    let hp = verify_theorem1(&upper, &right, 500, 0.0, Mode::Oracle, &opts).map_err(e2s)?;
    let small = RegionSpec::unit_disk();
    let big = RegionSpec::disk(p(0.0, 0.0), 2.0);
    let nested = verify_theorem1(&small, &big, 500, 1e-12, Mode::Oracle, &opts).map_err(e2s)?;
    let ok = hp.samples.len() == 500
        && hp.min_ratio >= 1.0 - 1e-12
        && nested.max_deviation <= 1e-12
        && nested.equality_detected;
    Ok((
        ok,
        format!(
            "half-planes min ratio {:.6} over {} samples; nested disks max |ratio - 1| {:.1e}, equality detected {}",
            hp.min_ratio,
            hp.samples.len(),
            nested.max_deviation,
            nested.equality_detected
        ),
    ))
}

fn overlapping_disks() -> (RegionSpec, RegionSpec) {
    (
        RegionSpec::disk(p(-0.5, 0.0), 1.0),
        RegionSpec::disk(p(0.5, 0.0), 1.0),
    )
}

fn theorem_pde() -> Check {
    let (left, right) = overlapping_disks();
    let opts = PdeOptions {
        h: 1.0 / 256.0,
        ..PdeOptions::default()
    };
    let rep = verify_theorem1(&left, &right, 500, 5e-3, Mode::Pde, &opts).map_err(e2s)?;
    let mid = submult_ratio(&left, &right, Point::ORIGIN, Mode::Pde, &opts).map_err(e2s)?;
    let exact_mid =
        submult_ratio(&left, &right, Point::ORIGIN, Mode::Oracle, &opts).map_err(e2s)?;
    let ok = rep.samples.len() == 500
        && rep.min_ratio >= 0.995
        && mid > 1.0 + 1e-3
        && !rep.equality_detected;
    Ok((
        ok,
        format!(
            "min ratio {:.5} over {} samples (limit 0.995); ratio at 0 {mid:.5} (closed form {exact_mid:.5}, limit > 1.001); equality detected {}",
            rep.min_ratio,
            rep.samples.len(),
            rep.equality_detected
        ),
    ))
}

fn weak_constant() -> Check {
    let upper = RegionSpec::half_plane(p(0.0, 0.0), p(0.0, 1.0));
    let right = RegionSpec::half_plane(p(0.0, 0.0), p(1.0, 0.0));
    let opts = PdeOptions {
        sample_window: Some(BBox::square(4.0)),
        ..PdeOptions::default()
    };
    let hp = verify_weak_constant(&upper, &right, 200, 1e-3, Mode::Oracle, &opts).map_err(e2s)?;
    let (left, right_disk) = overlapping_disks();
    let pde_opts = PdeOptions {
        h: 1.0 / 128.0,
        ..PdeOptions::default()
    };
    let disks =
        verify_weak_constant(&left, &right_disk, 200, 1e-3, Mode::Pde, &pde_opts).map_err(e2s)?;
    let ok = hp.samples.len() == 200
        && hp.curvature_ok
        && hp.min_ratio >= WEAK_CONSTANT
        && hp.min_ratio >= 1.0 - 1e-12
        && disks.min_ratio >= WEAK_CONSTANT;
    Ok((
        ok,
        format!(
            "half-planes: min curvature {:.6} (limit -2.001), min ratio {:.6} (limits 1/sqrt 2 and 1); overlapping disks (pde, h = 1/128): min ratio {:.5}, min curvature {:.4}",
            hp.min_curvature, hp.min_ratio, disks.min_ratio, disks.min_curvature
        ),
    ))
}

fn exhaustion_check() -> Check {
    let levels = exhaustion(
        &RegionSpec::unit_disk(),
        Chart::Identity,
        BBox::square(1.1),
        Query::Point(Point::ORIGIN),
        &[0.2, 0.1, 0.05, 0.02, 0.004],
        &[
            1.0 / 32.0,
            1.0 / 64.0,
            1.0 / 128.0,
            1.0 / 256.0,
            1.0 / 256.0,
        ],
    )
    .map_err(e2s)?;
    let values: Vec<f64> = levels.iter().map(|l| l.value).collect();
    let monotone = values.windows(2).all(|w| w[1] <= w[0]);
    let last = *values.last().ok_or("no levels")?;
    Ok((
        monotone && (last - 2.0).abs() <= 1e-2,
        format!(
            "values {} (non-increasing: {monotone}); finest {last:.5}, limit |finest - 2| <= 1e-2",
            values
                .iter()
                .map(|v| format!("{v:.5}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    ))
}

fn boundary_ratio_check() -> Check {
    let opts = PdeOptions::default();
    let dists = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];
    let disk = RegionSpec::unit_disk();
    let half = RegionSpec::intersection(vec![
        disk.clone(),
        RegionSpec::half_plane(p(0.0, 0.0), p(0.0, 1.0)),
    ]);
    let xi = p(0.0, 1.0);
    let pts = radial_approach(xi, Point::ORIGIN, &dists).map_err(e2s)?;
    let good = boundary_ratio(&disk, &half, xi, &pts, Mode::Oracle, &opts).map_err(e2s)?;
    let punctured = RegionSpec::intersection(vec![
        RegionSpec::disk(p(1.0, 0.0), 2.0),
        RegionSpec::punctured_plane(vec![p(1.0, 0.0)]),
    ]);
    let xi2 = p(1.0, 0.0);
    let pts2 = radial_approach(xi2, Point::ORIGIN, &dists).map_err(e2s)?;
    let bad = boundary_ratio(&punctured, &disk, xi2, &pts2, Mode::Oracle, &opts).map_err(e2s)?;
    let last = dists.len() - 1;
    let ok = good.windows(2).all(|w| w[1] >= w[0])
        && good[last] >= 0.95
        && bad.windows(2).all(|w| w[1] < w[0])
        && bad[last] <= 0.2;
    let fmt = |v: &[f64]| {
        v.iter()
            .map(|x| format!("{x:.4}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    Ok((
        ok,
        format!("half-disk in disk: {} (need rising, >= 0.95); punctured comparison: {} (need falling, <= 0.2)", fmt(&good), fmt(&bad)),
    ))
}

fn capacity_submult() -> Check {
    let hs = [1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0];
    let k1 = CompactSpec::disk(p(-0.5, 0.0), 1.0);
    let k2 = CompactSpec::disk(p(0.5, 0.0), 1.0);
    let over = verify_capacity_submult(&k1, &k2, &hs, 2e-2).map_err(e2s)?;
    let d1 = CompactSpec::disk(p(-1.5, 0.0), 1.0);
    let d2 = CompactSpec::disk(p(1.5, 0.0), 1.0);
    let apart = verify_capacity_submult(&d1, &d2, &hs, 0.0).map_err(e2s)?;
    Ok((
        over.holds && apart.lhs == 0.0 && apart.holds,
        format!(
            "overlapping: pcap(union) {:.5} * pcap(lens) {:.5} = {:.5} <= {:.5} * 1.02; disjoint: lhs {}",
            over.union.pcap, over.intersection.pcap, over.lhs, over.rhs, apart.lhs
        ),
    ))
}

enum Src {
    Closed(ClosedFormMetric),
    Solved(RegionSpec),
}

struct Pair {
    name: &'static str,
    /// The smaller domain U, sampled at distance ≥ 0.1 from its boundary.
    u_region: RegionSpec,
    u: Src,
    omega: Src,
}

const MONO_H: f64 = 1.0 / 64.0;

fn evaluate(src: &Src) -> Result<Box<dyn Fn(Point) -> Result<f64, String>>, String> {
    match src {
        Src::Closed(m) => {
            let m = m.clone();
            Ok(Box::new(move |z| m.density(z).map_err(e2s)))
        }
        Src::Solved(r) => {
            let bbox = r
                .bounding_box()
                .ok_or("solved fixture must be bounded")?
                .expand(4.0 * MONO_H);
            let f = solve_domain(r, Chart::Identity, bbox, MONO_H).map_err(e2s)?;
            Ok(Box::new(move |z| f.density_at(z).map_err(e2s)))
        }
    }
}

fn monotonicity() -> Check {
    let cat = |s: &str| -> Result<Src, String> { Ok(Src::Closed(s.parse().map_err(e2s)?)) };
    let upper = |y: f64| RegionSpec::half_plane(p(0.0, y), p(0.0, 1.0));
    let (left, right) = overlapping_disks();
    let lens = RegionSpec::intersection(vec![left.clone(), right.clone()]);
    let union = RegionSpec::union(vec![left.clone(), right.clone()]);
    let (s, c) = ((PI / 6.0).sin(), (PI / 6.0).cos());
    let narrow = RegionSpec::intersection(vec![
        RegionSpec::half_plane(Point::ORIGIN, p(s, -c)),
        RegionSpec::half_plane(Point::ORIGIN, p(s, c)),
    ]);
    let punctured_unit = RegionSpec::intersection(vec![
        RegionSpec::unit_disk(),
        RegionSpec::punctured_plane(vec![p(0.3, 0.0)]),
    ]);
    let half_disk = RegionSpec::intersection(vec![RegionSpec::unit_disk(), upper(0.0)]);
    let pairs = vec![
        Pair {
            name: "unit disk in D(0,2)",
            u_region: RegionSpec::unit_disk(),
            u: cat("unitdisk")?,
            omega: cat("disk:0,0,2")?,
        },
        Pair {
            name: "annulus in unit disk",
            u_region: RegionSpec::intersection(vec![
                RegionSpec::unit_disk(),
                RegionSpec::disk_complement(Point::ORIGIN, 0.5),
            ]),
            u: cat("annulus:0,0,0.5,1")?,
            omega: cat("unitdisk")?,
        },
        Pair {
            name: "wedge pi/3 in wedge pi/2",
            u_region: narrow,
            u: cat(&format!("wedge:0,0,0,{}", PI / 3.0))?,
            omega: cat(&format!("wedge:0,0,0,{}", PI / 2.0))?,
        },
        Pair {
            name: "punctured disks",
            u_region: RegionSpec::intersection(vec![
                RegionSpec::disk(Point::ORIGIN, 0.5),
                RegionSpec::punctured_plane(vec![Point::ORIGIN]),
            ]),
            u: cat("punctureddisk:0,0,0.5")?,
            omega: cat("punctureddisk:0,0,1")?,
        },
        Pair {
            name: "disk in half-plane",
            u_region: RegionSpec::disk(p(1.0, 0.0), 0.5),
            u: cat("disk:1,0,0.5")?,
            omega: cat("halfplane:0,0,1,0")?,
        },
        Pair {
            name: "nested half-planes",
            u_region: upper(1.0),
            u: cat("halfplane:0,1,0,1")?,
            omega: cat("halfplane:0,0,0,1")?,
        },
        Pair {
            name: "lens in disk",
            u_region: lens.clone(),
            u: Src::Closed(resolve(&lens).ok_or("lens did not resolve")?),
            omega: cat("disk:-0.5,0,1")?,
        },
        Pair {
            name: "lens in union (pde)",
            u_region: lens.clone(),
            u: Src::Solved(lens.clone()),
            omega: Src::Solved(union),
        },
        Pair {
            name: "punctured disk in disk (pde)",
            u_region: punctured_unit.clone(),
            u: Src::Solved(punctured_unit),
            omega: Src::Solved(RegionSpec::unit_disk()),
        },
        Pair {
            name: "half-disk (pde) in unit disk",
            u_region: half_disk.clone(),
            u: Src::Solved(half_disk),
            omega: cat("unitdisk")?,
        },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = (f64::NEG_INFINITY, "");
    let mut total = 0;
    for pair in &pairs {
        let lu = evaluate(&pair.u)?;
        let lo = evaluate(&pair.omega)?;
        let window = pair
            .u_region
            .bounding_box()
            .unwrap_or(BBox::new(-3.0, 3.0, 1.0, 4.0))
            .intersect(&BBox::square(4.0));
        let region = &pair.u_region;
        let pts = rejection_sample(&mut rng, 50, window, |z| region.distance(z) >= 0.1);
        for z in pts {
            let excess = lo(z)? - lu(z)?;
            total += 1;
            if excess > worst.0 {
                worst = (excess, pair.name);
            }
        }
    }
    Ok((
        worst.0 <= 5e-3,
        format!(
            "{} pairs, {total} samples; largest λ_Ω − λ_U = {:.3e} ({}), limit 5e-3",
            pairs.len(),
            worst.0,
            worst.1
        ),
    ))
}
