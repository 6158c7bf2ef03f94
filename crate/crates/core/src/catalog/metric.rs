use std::f64::consts::PI;
use std::fmt;

use crate::catalog::conformal::ConformalPrimitive;
use crate::error::{Error, Result};
use crate::point::Point;

/// Closed-form conformal metrics of constant curvature.
///
/// Everything except `Sphere` has curvature −1 and is normalized so that the
/// unit disk has density 2 at the origin.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedFormMetric {
    /// Spherical metric 2/(1+|z|²), curvature +1.
    Sphere,
    UnitDisk,
    Disk {
        center: Point,
        radius: f64,
    },
    HalfPlane {
        anchor: Point,
        normal: Point,
    },
    /// Open exterior of the closed disk, including ∞.
    ExteriorDisk {
        center: Point,
        radius: f64,
    },
    /// 0 < |z − c| < r.
    PuncturedDisk {
        center: Point,
        radius: f64,
    },
    /// r_in < |z − c| < r_out.
    Annulus {
        center: Point,
        r_in: f64,
        r_out: f64,
    },
    /// Points v + ρe^{i(φ+t)} with ρ > 0, |t| < θ/2, where φ is the bisector
    /// angle and θ ∈ (0, 2π] the opening.
    Wedge {
        vertex: Point,
        bisector: f64,
        opening: f64,
    },
    /// Density of `base` transported by `map`: λ(map(z))·|map′(z)|.
    Pullback {
        base: Box<ClosedFormMetric>,
        map: ConformalPrimitive,
    },
}

impl ClosedFormMetric {
    pub fn curvature(&self) -> f64 {
        match self {
            ClosedFormMetric::Sphere => 1.0,
            ClosedFormMetric::Pullback { base, .. } => base.curvature(),
            _ => -1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInput(m.to_string()));
        let pos = |r: f64| r.is_finite() && r > 0.0;
        match self {
            ClosedFormMetric::Sphere | ClosedFormMetric::UnitDisk => Ok(()),
            ClosedFormMetric::Disk { center, radius }
            | ClosedFormMetric::ExteriorDisk { center, radius }
            | ClosedFormMetric::PuncturedDisk { center, radius } => {
                if center.is_finite() && pos(*radius) {
                    Ok(())
                } else {
                    bad("radius must be positive and the center finite")
                }
            }
            ClosedFormMetric::HalfPlane { anchor, normal } => {
                if anchor.is_finite() && (normal.norm() - 1.0).abs() <= 1e-12 {
                    Ok(())
                } else {
                    bad("half-plane normal must be a unit vector")
                }
            }
            ClosedFormMetric::Annulus {
                center,
                r_in,
                r_out,
            } => {
                if center.is_finite() && pos(*r_in) && pos(*r_out) && r_in < r_out {
                    Ok(())
                } else {
                    bad("annulus needs 0 < r_in < r_out")
                }
            }
            ClosedFormMetric::Wedge {
                vertex,
                bisector,
                opening,
            } => {
                if vertex.is_finite()
                    && bisector.is_finite()
                    && *opening > 0.0
                    && *opening <= 2.0 * PI
                {
                    Ok(())
                } else {
                    bad("wedge opening must lie in (0, 2π]")
                }
            }
            ClosedFormMetric::Pullback { base, map } => {
                base.validate()?;
                map.validate()
            }
        }
    }

    /// Density at `z`, or a domain error when `z` is not an interior point.
    pub fn density(&self, z: Point) -> Result<f64> {
        if !z.is_finite() {
            return Err(Error::domain(z, "point must be finite"));
        }
        let outside = || {
            Err(Error::domain(
                z,
                "not an interior point of the metric's domain",
            ))
        };
        let value = match self {
            ClosedFormMetric::Sphere => 2.0 / (1.0 + z.norm_sqr()),
            ClosedFormMetric::UnitDisk => {
                let s = z.norm_sqr();
                if s >= 1.0 {
                    return outside();
                }
                2.0 / (1.0 - s)
            }
            ClosedFormMetric::Disk { center, radius } => {
                let s = (z - *center).norm_sqr();
                let r2 = radius * radius;
                if s >= r2 {
                    return outside();
                }
                2.0 * radius / (r2 - s)
            }
            ClosedFormMetric::HalfPlane { anchor, normal } => {
                let d = (z - *anchor).dot(*normal);
                if d <= 0.0 {
                    return outside();
                }
                1.0 / d
            }
            ClosedFormMetric::ExteriorDisk { center, radius } => {
                let s = (z - *center).norm_sqr();
                let r2 = radius * radius;
                if s <= r2 {
                    return outside();
                }
                2.0 * radius / (s - r2)
            }
            ClosedFormMetric::PuncturedDisk { center, radius } => {
                let rho = z.dist(*center);
                if rho == 0.0 || rho >= *radius {
                    return outside();
                }
                1.0 / (rho * (radius / rho).ln())
            }
            ClosedFormMetric::Annulus {
                center,
                r_in,
                r_out,
            } => {
                let rho = z.dist(*center);
                if rho <= *r_in || rho >= *r_out {
                    return outside();
                }
                let l = (r_out / r_in).ln();
                PI / (l * rho * (PI * (rho / r_in).ln() / l).sin())
            }
            ClosedFormMetric::Wedge {
                vertex,
                bisector,
                opening,
            } => {
                let v = z - *vertex;
                let rho = v.norm();
                if rho == 0.0 {
                    return outside();
                }
                let psi = wedge_angle(v, *bisector) + opening / 2.0;
                if psi <= 0.0 || psi >= *opening {
                    return outside();
                }
                PI / (opening * rho * (PI * psi / opening).sin())
            }
            ClosedFormMetric::Pullback { base, map } => {
                let (w, dw) = map.eval(z)?;
                let scale = dw.norm();
                if scale == 0.0 {
                    return Err(Error::SingularMap { x: z.x, y: z.y });
                }
                base.density(w)? * scale
            }
        };
        if value.is_finite() && value > 0.0 {
            Ok(value)
        } else {
            outside()
        }
    }

    pub fn contains(&self, z: Point) -> bool {
        self.density(z).is_ok()
    }
}

/// Angle of `v` measured from the direction `bisector`, in (−π, π].
fn wedge_angle(v: Point, bisector: f64) -> f64 {
    let (s, c) = bisector.sin_cos();
    let x = v.x * c + v.y * s;
    let y = v.y * c - v.x * s;
    y.atan2(x)
}

/// λ(z) for a closed-form metric.
pub fn eval_density(metric: &ClosedFormMetric, z: Point) -> Result<f64> {
    metric.density(z)
}

/// λ(map(z))·|map′(z)|.
pub fn pullback(metric: &ClosedFormMetric, map: &ConformalPrimitive, z: Point) -> Result<f64> {
    let (w, dw) = map.eval(z)?;
    let scale = dw.norm();
    if scale == 0.0 {
        return Err(Error::SingularMap { x: z.x, y: z.y });
    }
    Ok(metric.density(w)? * scale)
}

/// Δ_h log λ(z) − λ(z)² with the five-point Laplacian of spacing `h`.
///
/// Zero up to O(h²) for a curvature −1 density; −2λ² + O(h²) for the sphere.
pub fn curvature_residual<F>(density: F, z: Point, h: f64) -> Result<f64>
where
    F: Fn(Point) -> Result<f64>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(
            "stencil spacing must be positive".into(),
        ));
    }
    let c = density(z)?;
    let mut sum = 0.0;
    for (dx, dy) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
        sum += density(Point::new(z.x + dx, z.y + dy))?.ln();
    }
    let lap = (sum - 4.0 * c.ln()) / (h * h);
    Ok(lap - c * c)
}

impl fmt::Display for ClosedFormMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedFormMetric::Sphere => write!(f, "sphere"),
            ClosedFormMetric::UnitDisk => write!(f, "unitdisk"),
            ClosedFormMetric::Disk { center, radius } => {
                write!(f, "disk:{},{},{}", center.x, center.y, radius)
            }
            ClosedFormMetric::HalfPlane { anchor, normal } => {
                write!(
                    f,
                    "halfplane:{},{},{},{}",
                    anchor.x, anchor.y, normal.x, normal.y
                )
            }
            ClosedFormMetric::ExteriorDisk { center, radius } => {
                write!(f, "exteriordisk:{},{},{}", center.x, center.y, radius)
            }
            ClosedFormMetric::PuncturedDisk { center, radius } => {
                write!(f, "punctureddisk:{},{},{}", center.x, center.y, radius)
            }
            ClosedFormMetric::Annulus {
                center,
                r_in,
                r_out,
            } => {
                write!(f, "annulus:{},{},{},{}", center.x, center.y, r_in, r_out)
            }
            ClosedFormMetric::Wedge {
                vertex,
                bisector,
                opening,
            } => {
                write!(
                    f,
                    "wedge:{},{},{},{}",
                    vertex.x, vertex.y, bisector, opening
                )
            }
            ClosedFormMetric::Pullback { base, .. } => write!(f, "pullback({base})"),
        }
    }
}
