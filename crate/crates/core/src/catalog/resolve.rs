//! Recognition of region trees that have a closed-form metric.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::catalog::conformal::ConformalPrimitive;
use crate::catalog::metric::ClosedFormMetric;
use crate::geometry::{Primitive, RegionSpec};
use crate::point::Point;

const EPS: f64 = 1e-12;

/// Open disk, open half-plane, or open exterior of a closed disk.
#[derive(Debug, Clone, Copy, PartialEq)]
enum GDisk {
    Disk(Point, f64),
    Half(Point, Point),
    Ext(Point, f64),
}

/// Circle or line bounding a generalized disk.
#[derive(Debug, Clone, Copy)]
enum Boundary {
    Circle(Point, f64),
    Line(Point, Point),
}

impl GDisk {
    fn from_region(r: &RegionSpec) -> Option<GDisk> {
        match r {
            RegionSpec::Primitive(Primitive::Disk { center, radius }) => {
                Some(GDisk::Disk(*center, *radius))
            }
            RegionSpec::Primitive(Primitive::HalfPlane {
                anchor,
                inward_normal,
            }) => Some(GDisk::Half(*anchor, *inward_normal)),
            RegionSpec::Primitive(Primitive::DiskComplement { center, radius }) => {
                Some(GDisk::Ext(*center, *radius))
            }
            RegionSpec::Complement(arg) => match GDisk::from_region(arg)? {
                GDisk::Disk(c, r) => Some(GDisk::Ext(c, r)),
                GDisk::Ext(c, r) => Some(GDisk::Disk(c, r)),
                GDisk::Half(a, n) => Some(GDisk::Half(a, -n)),
            },
            RegionSpec::Union(args) | RegionSpec::Intersection(args) if args.len() == 1 => {
                GDisk::from_region(&args[0])
            }
            _ => None,
        }
    }

    fn metric(self) -> ClosedFormMetric {
        match self {
            GDisk::Disk(center, radius) => ClosedFormMetric::Disk { center, radius },
            GDisk::Half(anchor, normal) => ClosedFormMetric::HalfPlane { anchor, normal },
            GDisk::Ext(center, radius) => ClosedFormMetric::ExteriorDisk { center, radius },
        }
    }

    fn boundary(self) -> Boundary {
        match self {
            GDisk::Disk(c, r) | GDisk::Ext(c, r) => Boundary::Circle(c, r),
            GDisk::Half(a, n) => Boundary::Line(a, n),
        }
    }

    /// A point strictly inside, never on the boundary.
    fn interior_point(self) -> Point {
        match self {
            GDisk::Disk(c, _) => c,
            GDisk::Half(a, n) => a + n,
            GDisk::Ext(c, r) => c + Point::new(3.0 * r, 0.0),
        }
    }

    /// `self ⊆ other` as open sets.
    fn subset_of(self, other: GDisk) -> bool {
        match (self, other) {
            (GDisk::Disk(c1, r1), GDisk::Disk(c2, r2)) => c1.dist(c2) + r1 <= r2 + EPS,
            (GDisk::Disk(c, r), GDisk::Half(a, n)) => (c - a).dot(n) >= r - EPS,
            (GDisk::Disk(c1, r1), GDisk::Ext(c2, r2)) => c1.dist(c2) >= r1 + r2 - EPS,
            (GDisk::Half(a1, n1), GDisk::Half(a2, n2)) => {
                n1.dist(n2) <= EPS && (a1 - a2).dot(n2) >= -EPS
            }
            (GDisk::Half(a, n), GDisk::Ext(c, r)) => (c - a).dot(n) <= -r + EPS,
            (GDisk::Ext(c1, r1), GDisk::Ext(c2, r2)) => c1.dist(c2) + r2 <= r1 + EPS,
            _ => false,
        }
    }
}

/// Transversal crossing points of two boundaries; `None` in the second slot
/// stands for ∞ (two non-parallel lines).
fn crossings(b1: Boundary, b2: Boundary) -> Option<(Point, Option<Point>)> {
    match (b1, b2) {
        (Boundary::Circle(c1, r1), Boundary::Circle(c2, r2)) => {
            let d = c1.dist(c2);
            if d <= (r1 - r2).abs() + EPS || d >= r1 + r2 - EPS {
                return None;
            }
            let a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
            let h = (r1 * r1 - a * a).max(0.0).sqrt();
            let u = (c2 - c1) * (1.0 / d);
            let m = c1 + u * a;
            Some((m + u.perp() * h, Some(m - u.perp() * h)))
        }
        (Boundary::Circle(c, r), Boundary::Line(a, n))
        | (Boundary::Line(a, n), Boundary::Circle(c, r)) => {
            let s = (c - a).dot(n);
            if s.abs() >= r - EPS {
                return None;
            }
            let foot = c - n * s;
            let h = (r * r - s * s).sqrt();
            Some((foot + n.perp() * h, Some(foot - n.perp() * h)))
        }
        (Boundary::Line(a1, n1), Boundary::Line(a2, n2)) => {
            let det = n1.x * n2.y - n1.y * n2.x;
            if det.abs() <= EPS {
                return None;
            }
            let s1 = a1.dot(n1);
            let s2 = a2.dot(n2);
            let p = Point::new((s1 * n2.y - s2 * n1.y) / det, (n1.x * s2 - n2.x * s1) / det);
            Some((p, None))
        }
    }
}

/// Metric of the intersection (or union) of two generalized disks whose
/// boundaries cross: a Möbius map sends the crossing points to 0 and ∞ and
/// the biangle to a wedge.
fn biangle(g1: GDisk, g2: GDisk, union: bool) -> Option<ClosedFormMetric> {
    let (p, q) = crossings(g1.boundary(), g2.boundary())?;
    let one = Complex64::new(1.0, 0.0);
    let map = match q {
        Some(q) => ConformalPrimitive::Moebius {
            a: one,
            b: -p.to_complex(),
            c: one,
            d: -q.to_complex(),
        },
        None => ConformalPrimitive::translation(-p),
    };
    let normal = |g: GDisk| -> Option<Point> {
        let m = match (g, q) {
            // M(∞) = 1 when q is finite.
            (GDisk::Ext(..), Some(_)) => Point::new(1.0, 0.0),
            _ => map.apply(g.interior_point()).ok()?,
        };
        // The image line passes through 0; its direction is the image of any
        // other boundary point.
        let b = match g.boundary() {
            Boundary::Circle(c, _) => {
                let far = c * 2.0 - p;
                if far.dist(q.unwrap_or(far)) > EPS {
                    far
                } else {
                    c + (c - p).perp()
                }
            }
            Boundary::Line(_, n) => p + n.perp(),
        };
        let dir = map.apply(b).ok()?;
        let len = dir.norm();
        if !(len > 0.0 && len.is_finite()) {
            return None;
        }
        let nrm = dir.perp() * (1.0 / len);
        let side = m.dot(nrm);
        if side.abs() <= EPS {
            return None;
        }
        Some(if side > 0.0 { nrm } else { -nrm })
    };
    let n1 = normal(g1)?;
    let n2 = normal(g2)?;
    let sum = n1 + n2;
    if sum.norm() <= EPS {
        return None;
    }
    let alpha = PI - n1.dot(n2).clamp(-1.0, 1.0).acos();
    let opening = if union { 2.0 * PI - alpha } else { alpha };
    Some(ClosedFormMetric::Pullback {
        base: Box::new(ClosedFormMetric::Wedge {
            vertex: Point::ORIGIN,
            bisector: sum.y.atan2(sum.x),
            opening,
        }),
        map,
    })
}

fn pair(a: &RegionSpec, b: &RegionSpec, union: bool) -> Option<ClosedFormMetric> {
    if a == b {
        return resolve(a);
    }
    if !union {
        if let Some(m) = punctured_disk(a, b).or_else(|| punctured_disk(b, a)) {
            return Some(m);
        }
    }
    let g1 = GDisk::from_region(a)?;
    let g2 = GDisk::from_region(b)?;
    let (small, big) = if g1.subset_of(g2) {
        (g1, g2)
    } else if g2.subset_of(g1) {
        (g2, g1)
    } else {
        if !union {
            if let Some(m) = annulus(g1, g2).or_else(|| annulus(g2, g1)) {
                return Some(m);
            }
        }
        return biangle(g1, g2, union);
    };
    Some(if union { big.metric() } else { small.metric() })
}

fn annulus(g1: GDisk, g2: GDisk) -> Option<ClosedFormMetric> {
    match (g1, g2) {
        (GDisk::Disk(c1, r_out), GDisk::Ext(c2, r_in)) if c1 == c2 && r_in < r_out => {
            Some(ClosedFormMetric::Annulus {
                center: c1,
                r_in,
                r_out,
            })
        }
        _ => None,
    }
}

fn punctured_disk(a: &RegionSpec, b: &RegionSpec) -> Option<ClosedFormMetric> {
    let GDisk::Disk(center, radius) = GDisk::from_region(a)? else {
        return None;
    };
    match b {
        RegionSpec::Primitive(Primitive::PuncturedPlane { punctures }) => {
            let inside: Vec<&Point> = punctures
                .iter()
                .filter(|p| p.dist(center) < radius)
                .collect();
            if inside.len() == 1 && *inside[0] == center {
                Some(ClosedFormMetric::PuncturedDisk { center, radius })
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Closed-form metric of `region` if the region is one of the recognized
/// shapes: disks, half-planes, disk exteriors, their complements, nested or
/// crossing pairs of those, concentric annuli and punctured disks.
pub fn resolve(region: &RegionSpec) -> Option<ClosedFormMetric> {
    region.validate().ok()?;
    if let Some(g) = GDisk::from_region(region) {
        return Some(g.metric());
    }
    match region {
        RegionSpec::Complement(arg) => match arg.as_ref() {
            RegionSpec::Complement(inner) => resolve(inner),
            _ => None,
        },
        RegionSpec::Union(args) | RegionSpec::Intersection(args) => {
            let union = matches!(region, RegionSpec::Union(_));
            match args.as_slice() {
                [one] => resolve(one),
                [a, b] => pair(a, b, union),
                _ => None,
            }
        }
        RegionSpec::Primitive(_) => None,
    }
}
