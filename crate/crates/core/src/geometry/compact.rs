//! Compact subsets of the plane: closed disks, closed segments, finite point
//! sets, and finite unions and intersections of those.

use crate::error::{Error, Result};
use crate::geometry::region::RegionSpec;
use crate::point::{BBox, Point};

const CLOSED_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum CompactSpec {
    Disk { center: Point, radius: f64 },
    Segment { a: Point, b: Point },
    Points(Vec<Point>),
    Union(Vec<CompactSpec>),
    Intersection(Vec<CompactSpec>),
}

/// Number of distinct points in a compact set, saturating at "many".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointCount {
    Zero,
    One,
    Two,
    Many,
}

impl PointCount {
    fn of(n: usize) -> Self {
        match n {
            0 => PointCount::Zero,
            1 => PointCount::One,
            2 => PointCount::Two,
            _ => PointCount::Many,
        }
    }

    pub fn is_degenerate(self) -> bool {
        self != PointCount::Many
    }
}

#[derive(Debug, Clone, PartialEq)]
enum PointSet {
    Finite(Vec<Point>),
    Infinite,
}

fn dedup(points: impl IntoIterator<Item = Point>) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for p in points {
        if !out
            .iter()
            .any(|q| q.dist(p) <= CLOSED_TOL * (1.0 + q.norm()))
        {
            out.push(p);
        }
    }
    out
}

impl CompactSpec {
    pub fn disk(center: Point, radius: f64) -> Self {
        CompactSpec::Disk { center, radius }
    }

    pub fn segment(a: Point, b: Point) -> Self {
        CompactSpec::Segment { a, b }
    }

    pub fn points(points: Vec<Point>) -> Self {
        CompactSpec::Points(points)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CompactSpec::Disk { center, radius } => {
                if !center.is_finite() || !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::Structural(
                        "closed disk needs a finite center and positive radius".into(),
                    ));
                }
            }
            CompactSpec::Segment { a, b } => {
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::Structural("segment ends must be finite".into()));
                }
            }
            CompactSpec::Points(ps) => {
                if ps.is_empty() {
                    return Err(Error::Structural("point set must not be empty".into()));
                }
                if ps.iter().any(|p| !p.is_finite()) {
                    return Err(Error::Structural("points must be finite".into()));
                }
            }
            CompactSpec::Union(args) | CompactSpec::Intersection(args) => {
                if args.is_empty() {
                    return Err(Error::Structural("boolean node without arguments".into()));
                }
                args.iter().try_for_each(CompactSpec::validate)?;
            }
        }
        Ok(())
    }

    /// Closed membership.
    pub fn contains(&self, p: Point) -> bool {
        match self {
            CompactSpec::Disk { center, radius } => p.dist(*center) <= radius * (1.0 + CLOSED_TOL),
            CompactSpec::Segment { a, b } => {
                p.dist_to_segment(*a, *b) <= CLOSED_TOL * (1.0 + a.dist(*b))
            }
            CompactSpec::Points(ps) => ps
                .iter()
                .any(|q| q.dist(p) <= CLOSED_TOL * (1.0 + q.norm())),
            CompactSpec::Union(args) => args.iter().any(|a| a.contains(p)),
            CompactSpec::Intersection(args) => args.iter().all(|a| a.contains(p)),
        }
    }

    /// The open set `C \ K` (which also contains the point at infinity).
    pub fn complement_region(&self) -> RegionSpec {
        match self {
            CompactSpec::Disk { center, radius } => RegionSpec::disk_complement(*center, *radius),
            CompactSpec::Segment { a, b } if a == b => RegionSpec::punctured_plane(vec![*a]),
            CompactSpec::Segment { a, b } => RegionSpec::complement(RegionSpec::segment(*a, *b)),
            CompactSpec::Points(ps) => RegionSpec::punctured_plane(dedup(ps.iter().copied())),
            CompactSpec::Union(args) => {
                RegionSpec::intersection(args.iter().map(CompactSpec::complement_region).collect())
            }
            CompactSpec::Intersection(args) => {
                RegionSpec::union(args.iter().map(CompactSpec::complement_region).collect())
            }
        }
    }

    pub fn bounding_box(&self) -> BBox {
        match self {
            CompactSpec::Disk { center, radius } => BBox::new(
                center.x - radius,
                center.x + radius,
                center.y - radius,
                center.y + radius,
            ),
            CompactSpec::Segment { a, b } => {
                BBox::new(a.x.min(b.x), a.x.max(b.x), a.y.min(b.y), a.y.max(b.y))
            }
            CompactSpec::Points(ps) => ps
                .iter()
                .skip(1)
                .fold(BBox::new(ps[0].x, ps[0].x, ps[0].y, ps[0].y), |b, p| {
                    b.union(&BBox::new(p.x, p.x, p.y, p.y))
                }),
            CompactSpec::Union(args) | CompactSpec::Intersection(args) => args
                .iter()
                .map(CompactSpec::bounding_box)
                .reduce(|a, b| a.union(&b))
                .expect("validated compact has arguments"),
        }
    }

    /// Upper bound on `|k - about|` over `k` in the set.
    pub fn radius_about(&self, about: Point) -> f64 {
        match self {
            CompactSpec::Disk { center, radius } => center.dist(about) + radius,
            CompactSpec::Segment { a, b } => a.dist(about).max(b.dist(about)),
            CompactSpec::Points(ps) => ps.iter().map(|q| q.dist(about)).fold(0.0, f64::max),
            CompactSpec::Union(args) => args
                .iter()
                .map(|a| a.radius_about(about))
                .fold(0.0, f64::max),
            CompactSpec::Intersection(args) => args
                .iter()
                .map(|a| a.radius_about(about))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Lower bound on the distance from `p` to the complement of the set
    /// (zero unless `p` is an interior point).
    pub fn inner_radius(&self, p: Point) -> f64 {
        match self {
            CompactSpec::Disk { center, radius } => (radius - p.dist(*center)).max(0.0),
            CompactSpec::Segment { .. } | CompactSpec::Points(_) => 0.0,
            CompactSpec::Union(args) => args.iter().map(|a| a.inner_radius(p)).fold(0.0, f64::max),
            CompactSpec::Intersection(args) => args
                .iter()
                .map(|a| a.inner_radius(p))
                .fold(f64::INFINITY, f64::min),
        }
    }

    fn anchor_candidates(&self, out: &mut Vec<Point>) {
        match self {
            CompactSpec::Disk { center, .. } => out.push(*center),
            CompactSpec::Segment { a, b } => out.push((*a + *b) * 0.5),
            CompactSpec::Points(ps) => out.extend(ps.iter().copied()),
            CompactSpec::Union(args) | CompactSpec::Intersection(args) => {
                args.iter().for_each(|a| a.anchor_candidates(out))
            }
        }
    }

    /// A point of the set used as the centre of the inversion chart: the
    /// candidate with the largest inner radius, otherwise the member
    /// candidate closest to the candidates' centroid.
    pub fn anchor(&self) -> Point {
        let mut cands = Vec::new();
        self.anchor_candidates(&mut cands);
        let n = cands.len() as f64;
        let centroid = cands.iter().fold(Point::ORIGIN, |a, &b| a + b) * (1.0 / n);
        cands.push(centroid);
        let best = cands
            .iter()
            .copied()
            .map(|c| (c, self.inner_radius(c)))
            .fold(None::<(Point, f64)>, |acc, (c, r)| match acc {
                Some((_, br)) if br >= r => acc,
                _ => Some((c, r)),
            });
        if let Some((c, r)) = best {
            if r > 0.0 {
                return c;
            }
        }
        cands
            .iter()
            .copied()
            .filter(|c| self.contains(*c))
            .min_by(|a, b| a.dist(centroid).total_cmp(&b.dist(centroid)))
            .unwrap_or(cands[0])
    }

    /// Classifies the number of distinct points of the set.
    pub fn point_count(&self) -> Result<PointCount> {
        self.validate()?;
        Ok(match self.point_set()? {
            PointSet::Infinite => PointCount::Many,
            PointSet::Finite(ps) => PointCount::of(ps.len()),
        })
    }

    fn point_set(&self) -> Result<PointSet> {
        Ok(match self {
            CompactSpec::Disk { .. } => PointSet::Infinite,
            CompactSpec::Segment { a, b } => {
                if a == b {
                    PointSet::Finite(vec![*a])
                } else {
                    PointSet::Infinite
                }
            }
            CompactSpec::Points(ps) => PointSet::Finite(dedup(ps.iter().copied())),
            CompactSpec::Union(args) => {
                let mut pts = Vec::new();
                for a in args {
                    match a.point_set()? {
                        PointSet::Infinite => return Ok(PointSet::Infinite),
                        PointSet::Finite(ps) => pts.extend(ps),
                    }
                }
                PointSet::Finite(dedup(pts))
            }
            CompactSpec::Intersection(args) => {
                let sets = args
                    .iter()
                    .map(CompactSpec::point_set)
                    .collect::<Result<Vec<_>>>()?;
                if let Some(PointSet::Finite(ps)) =
                    sets.iter().find(|s| matches!(s, PointSet::Finite(_)))
                {
                    let kept = ps
                        .iter()
                        .copied()
                        .filter(|p| args.iter().all(|a| a.contains(*p)));
                    return Ok(PointSet::Finite(dedup(kept)));
                }
                match args.as_slice() {
                    [a] => a.point_set()?,
                    [a, b] => leaf_intersection(a, b)?,
                    _ => {
                        return Err(Error::Indeterminate(
                            "intersection of more than two continua".into(),
                        ))
                    }
                }
            }
        })
    }
}

fn leaf_intersection(a: &CompactSpec, b: &CompactSpec) -> Result<PointSet> {
    use CompactSpec::*;
    let tol = CLOSED_TOL;
    Ok(match (a, b) {
        (
            Disk {
                center: c1,
                radius: r1,
            },
            Disk {
                center: c2,
                radius: r2,
            },
        ) => {
            let d = c1.dist(*c2);
            let scale = 1.0 + r1 + r2;
            if d < r1 + r2 - tol * scale {
                PointSet::Infinite
            } else if d <= r1 + r2 + tol * scale {
                PointSet::Finite(vec![*c1 + (*c2 - *c1) * (r1 / d)])
            } else {
                PointSet::Finite(vec![])
            }
        }
        (Disk { center, radius }, Segment { a: s0, b: s1 })
        | (Segment { a: s0, b: s1 }, Disk { center, radius }) => {
            let ab = *s1 - *s0;
            let f = *s0 - *center;
            let qa = ab.norm_sqr();
            let qb = 2.0 * f.dot(ab);
            let qc = f.norm_sqr() - radius * radius;
            let disc = qb * qb - 4.0 * qa * qc;
            if disc < -tol * qa {
                return Ok(PointSet::Finite(vec![]));
            }
            let sq = disc.max(0.0).sqrt();
            let t0 = ((-qb - sq) / (2.0 * qa)).max(0.0);
            let t1 = ((-qb + sq) / (2.0 * qa)).min(1.0);
            if t1 - t0 > tol {
                PointSet::Infinite
            } else if t1 - t0 >= -tol {
                PointSet::Finite(vec![*s0 + ab * t0.clamp(0.0, 1.0)])
            } else {
                PointSet::Finite(vec![])
            }
        }
        (Segment { a: p0, b: p1 }, Segment { a: q0, b: q1 }) => {
            let r = *p1 - *p0;
            let s = *q1 - *q0;
            let cross = |u: Point, v: Point| u.x * v.y - u.y * v.x;
            let denom = cross(r, s);
            let qp = *q0 - *p0;
            let scale = r.norm() * s.norm();
            if denom.abs() <= tol * scale {
                if cross(qp, r).abs() > tol * (1.0 + qp.norm()) * r.norm() {
                    return Ok(PointSet::Finite(vec![]));
                }
                let rr = r.norm_sqr();
                let t0 = qp.dot(r) / rr;
                let t1 = (*q1 - *p0).dot(r) / rr;
                let (lo, hi) = (t0.min(t1).max(0.0), t0.max(t1).min(1.0));
                if hi - lo > tol {
                    PointSet::Infinite
                } else if hi - lo >= -tol {
                    PointSet::Finite(vec![*p0 + r * lo])
                } else {
                    PointSet::Finite(vec![])
                }
            } else {
                let t = cross(qp, s) / denom;
                let u = cross(qp, r) / denom;
                if (-tol..=1.0 + tol).contains(&t) && (-tol..=1.0 + tol).contains(&u) {
                    PointSet::Finite(vec![*p0 + r * t])
                } else {
                    PointSet::Finite(vec![])
                }
            }
        }
        _ => {
            return Err(Error::Indeterminate(
                "intersection of nested compact combinations".into(),
            ))
        }
    })
}
