//! Open subsets of the sphere described as CSG trees over analytic primitives.
//!
//! Every node carries a signed distance bound `sdf`: negative inside the open
//! set, positive outside, and `|sdf|` never exceeds the Euclidean distance to
//! the boundary. Union takes the minimum, intersection the maximum and
//! complement negates, so membership is `sdf < 0` throughout. For a complement
//! this yields `not(closure(arg))`, which keeps every described set open.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::point::{BBox, Point};

/// Tolerance on the length of half-plane normals.
const NORMAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Primitive {
    /// Open disk.
    Disk {
        center: Point,
        radius: f64,
    },
    /// Open half-plane `{ p : (p - anchor) . normal > 0 }`.
    HalfPlane {
        anchor: Point,
        inward_normal: Point,
    },
    /// Exterior of a closed disk; contains the point at infinity.
    DiskComplement {
        center: Point,
        radius: f64,
    },
    /// The plane with finitely many points removed.
    PuncturedPlane {
        punctures: Vec<Point>,
    },
    FullPlane,
    /// Closed segment. Its interior is empty, so it only matters under a
    /// complement, where it produces a slit.
    Segment {
        a: Point,
        b: Point,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum RegionSpec {
    Primitive(Primitive),
    Union(Vec<RegionSpec>),
    Intersection(Vec<RegionSpec>),
    Complement(Box<RegionSpec>),
}

impl From<Primitive> for RegionSpec {
    fn from(p: Primitive) -> Self {
        RegionSpec::Primitive(p)
    }
}

impl Primitive {
    pub fn validate(&self) -> Result<()> {
        let finite = |p: &Point, what: &str| {
            if p.is_finite() {
                Ok(())
            } else {
                Err(Error::Structural(format!("{what} must be finite")))
            }
        };
        match self {
            Primitive::Disk { center, radius } | Primitive::DiskComplement { center, radius } => {
                finite(center, "center")?;
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::Structural(format!(
                        "radius must be positive and finite, got {radius}"
                    )));
                }
            }
            Primitive::HalfPlane {
                anchor,
                inward_normal,
            } => {
                finite(anchor, "anchor")?;
                finite(inward_normal, "normal")?;
                if (inward_normal.norm() - 1.0).abs() > NORMAL_TOL {
                    return Err(Error::Structural(format!(
                        "half-plane normal must have unit length, got {}",
                        inward_normal.norm()
                    )));
                }
            }
            Primitive::PuncturedPlane { punctures } => {
                if punctures.is_empty() {
                    return Err(Error::Structural(
                        "punctured plane needs at least one point".into(),
                    ));
                }
                for (i, p) in punctures.iter().enumerate() {
                    finite(p, "puncture")?;
                    if punctures[..i].iter().any(|q| q == p) {
                        return Err(Error::Structural(format!("duplicate puncture {p}")));
                    }
                }
            }
            Primitive::FullPlane => {}
            Primitive::Segment { a, b } => {
                finite(a, "segment end")?;
                finite(b, "segment end")?;
            }
        }
        Ok(())
    }

    fn sdf(&self, p: Point, with_punctures: bool) -> f64 {
        match self {
            Primitive::Disk { center, radius } => p.dist(*center) - radius,
            Primitive::HalfPlane {
                anchor,
                inward_normal,
            } => -(p - *anchor).dot(*inward_normal),
            Primitive::DiskComplement { center, radius } => radius - p.dist(*center),
            Primitive::PuncturedPlane { punctures } => {
                if with_punctures {
                    -punctures
                        .iter()
                        .map(|q| p.dist(*q))
                        .fold(f64::INFINITY, f64::min)
                } else {
                    f64::NEG_INFINITY
                }
            }
            Primitive::FullPlane => f64::NEG_INFINITY,
            Primitive::Segment { a, b } => p.dist_to_segment(*a, *b),
        }
    }

    /// Signed curvature of the boundary, positive where the primitive's
    /// interior is locally convex.
    fn curvature(&self) -> f64 {
        match self {
            Primitive::Disk { radius, .. } => 1.0 / radius,
            Primitive::DiskComplement { radius, .. } => -1.0 / radius,
            _ => 0.0,
        }
    }

    fn bounding_box(&self) -> Option<BBox> {
        match self {
            Primitive::Disk { center, radius } => Some(BBox::new(
                center.x - radius,
                center.x + radius,
                center.y - radius,
                center.y + radius,
            )),
            Primitive::Segment { a, b } => Some(BBox::new(
                a.x.min(b.x),
                a.x.max(b.x),
                a.y.min(b.y),
                a.y.max(b.y),
            )),
            _ => None,
        }
    }

    /// Box containing the boundary, punctures included.
    fn boundary_box(&self) -> Option<BBox> {
        match self {
            Primitive::DiskComplement { center, radius } => {
                Primitive::Disk { center: *center, radius: *radius }.bounding_box()
            }
            Primitive::PuncturedPlane { punctures } => {
                let (first, rest) = punctures.split_first()?;
                let mut b = BBox::new(first.x, first.x, first.y, first.y);
                for q in rest {
                    b = b.union(&BBox::new(q.x, q.x, q.y, q.y));
                }
                Some(b)
            }
            _ => self.bounding_box(),
        }
    }

    fn infinity_radius(&self) -> Option<f64> {
        match self {
            Primitive::DiskComplement { center, radius } => Some(center.norm() + radius),
            Primitive::PuncturedPlane { punctures } => {
                Some(punctures.iter().map(|q| q.norm()).fold(0.0, f64::max))
            }
            Primitive::FullPlane => Some(0.0),
            _ => None,
        }
    }
}

/// Result of classifying the spherical complement of a region.
#[derive(Debug, Clone, PartialEq)]
enum ComplementWitness {
    Infinite,
    Finite(usize),
}

impl RegionSpec {
    pub fn disk(center: Point, radius: f64) -> Self {
        Primitive::Disk { center, radius }.into()
    }

    pub fn unit_disk() -> Self {
        Self::disk(Point::ORIGIN, 1.0)
    }

    pub fn half_plane(anchor: Point, inward_normal: Point) -> Self {
        Primitive::HalfPlane {
            anchor,
            inward_normal,
        }
        .into()
    }

    pub fn disk_complement(center: Point, radius: f64) -> Self {
        Primitive::DiskComplement { center, radius }.into()
    }

    pub fn punctured_plane(punctures: Vec<Point>) -> Self {
        Primitive::PuncturedPlane { punctures }.into()
    }

    pub fn full_plane() -> Self {
        Primitive::FullPlane.into()
    }

    pub fn segment(a: Point, b: Point) -> Self {
        Primitive::Segment { a, b }.into()
    }

    pub fn union(args: Vec<RegionSpec>) -> Self {
        RegionSpec::Union(args)
    }

    pub fn intersection(args: Vec<RegionSpec>) -> Self {
        RegionSpec::Intersection(args)
    }

    pub fn complement(arg: RegionSpec) -> Self {
        RegionSpec::Complement(Box::new(arg))
    }

    /// Checks primitive invariants and that every boolean node has arguments.
    pub fn validate(&self) -> Result<()> {
        match self {
            RegionSpec::Primitive(p) => p.validate(),
            RegionSpec::Union(args) | RegionSpec::Intersection(args) => {
                if args.is_empty() {
                    return Err(Error::Structural("boolean node without arguments".into()));
                }
                args.iter().try_for_each(RegionSpec::validate)
            }
            RegionSpec::Complement(arg) => arg.validate(),
        }
    }

    /// Membership in the open set, after validating the tree.
    pub fn contains(&self, p: Point) -> Result<bool> {
        self.validate()?;
        if !p.is_finite() {
            return Err(Error::InvalidInput("query point must be finite".into()));
        }
        Ok(self.is_member(p))
    }

    /// Membership without validation; for hot loops over validated trees.
    pub fn is_member(&self, p: Point) -> bool {
        self.sdf(p) < 0.0
    }

    /// Signed distance bound (negative inside).
    pub fn sdf(&self, p: Point) -> f64 {
        self.sdf_impl(p, true)
    }

    /// Signed distance bound that ignores isolated punctures, i.e. the
    /// distance to the non-degenerate part of the boundary.
    pub fn smooth_sdf(&self, p: Point) -> f64 {
        self.sdf_impl(p, false)
    }

    fn sdf_impl(&self, p: Point, with_punctures: bool) -> f64 {
        match self {
            RegionSpec::Primitive(prim) => prim.sdf(p, with_punctures),
            RegionSpec::Union(args) => args
                .iter()
                .map(|a| a.sdf_impl(p, with_punctures))
                .fold(f64::INFINITY, f64::min),
            RegionSpec::Intersection(args) => args
                .iter()
                .map(|a| a.sdf_impl(p, with_punctures))
                .fold(f64::NEG_INFINITY, f64::max),
            RegionSpec::Complement(arg) => -arg.sdf_impl(p, with_punctures),
        }
    }

    /// Curvature of the smooth boundary piece nearest to `p` (the piece that
    /// realizes `smooth_sdf`), signed positive where the region is locally
    /// convex.
    pub fn boundary_curvature(&self, p: Point) -> f64 {
        let piece = self.nearest_piece(p);
        let k = piece.prim.map_or(0.0, Primitive::curvature);
        if piece.flipped {
            -k
        } else {
            k
        }
    }

    /// Index (depth-first over primitives) of the primitive whose boundary
    /// realizes `smooth_sdf` at `p`.
    pub fn boundary_piece(&self, p: Point) -> usize {
        self.nearest_piece(p).id
    }

    /// log of the exact density of the side of the nearest boundary piece
    /// that contains `p`: the disk, disk exterior or half-plane bounded by
    /// it, or the plane slit along a ray for segment pieces (measured from
    /// the nearer endpoint). `None` when `p` is not on the region side.
    pub fn boundary_model(&self, p: Point) -> Option<f64> {
        let piece = self.nearest_piece(p);
        piece.prim?.side_model(p, piece.flipped)
    }

    fn nearest_piece(&self, p: Point) -> Piece<'_> {
        let mut next = 0;
        self.sdf_piece(p, &mut next)
    }

    fn sdf_piece(&self, p: Point, next: &mut usize) -> Piece<'_> {
        match self {
            RegionSpec::Primitive(prim) => {
                let id = *next;
                *next += 1;
                Piece {
                    sdf: prim.sdf(p, false),
                    prim: Some(prim),
                    flipped: false,
                    id,
                }
            }
            RegionSpec::Union(args) | RegionSpec::Intersection(args) => {
                let union = matches!(self, RegionSpec::Union(_));
                let mut best: Option<Piece<'_>> = None;
                for a in args {
                    let x = a.sdf_piece(p, next);
                    let better = match &best {
                        None => true,
                        Some(b) => (union && x.sdf < b.sdf) || (!union && x.sdf > b.sdf),
                    };
                    if better {
                        best = Some(x);
                    }
                }
                best.expect("validated boolean node has arguments")
            }
            RegionSpec::Complement(arg) => {
                let x = arg.sdf_piece(p, next);
                Piece {
                    sdf: -x.sdf,
                    flipped: !x.flipped,
                    ..x
                }
            }
        }
    }

    /// Distance from an interior point to the boundary: exact for single
    /// primitives, a lower bound for boolean combinations.
    pub fn distance_to_boundary(&self, p: Point) -> Result<f64> {
        if !self.contains(p)? {
            return Err(Error::domain(p, "point is not inside the region"));
        }
        Ok(-self.sdf(p))
    }

    /// Distance to the boundary ignoring isolated punctures (infinite when
    /// the region has no other boundary).
    pub fn smooth_distance(&self, p: Point) -> f64 {
        -self.smooth_sdf(p)
    }

    /// Isolated boundary points contributed by punctured-plane primitives.
    pub fn punctures(&self) -> Vec<Point> {
        let mut all = Vec::new();
        self.collect_puncture_candidates(&mut all);
        let mut out: Vec<Point> = Vec::new();
        for q in all {
            if !self.is_member(q) && self.smooth_sdf(q) < 0.0 && !out.contains(&q) {
                out.push(q);
            }
        }
        out
    }

    fn collect_puncture_candidates(&self, out: &mut Vec<Point>) {
        match self {
            RegionSpec::Primitive(Primitive::PuncturedPlane { punctures }) => {
                out.extend(punctures.iter().copied())
            }
            RegionSpec::Primitive(_) => {}
            RegionSpec::Union(args) | RegionSpec::Intersection(args) => {
                args.iter().for_each(|a| a.collect_puncture_candidates(out))
            }
            RegionSpec::Complement(arg) => arg.collect_puncture_candidates(out),
        }
    }

    /// Bounding box of the (closure of the) region, if it is bounded.
    pub fn bounding_box(&self) -> Option<BBox> {
        match self {
            RegionSpec::Primitive(p) => p.bounding_box(),
            RegionSpec::Union(args) => {
                let mut acc: Option<BBox> = None;
                for a in args {
                    let b = a.bounding_box()?;
                    acc = Some(acc.map_or(b, |x| x.union(&b)));
                }
                acc
            }
            RegionSpec::Intersection(args) => args
                .iter()
                .filter_map(RegionSpec::bounding_box)
                .reduce(|a, b| a.intersect(&b)),
            RegionSpec::Complement(arg) => arg.infinity_radius().map(BBox::square),
        }
    }

    /// Box containing the boundary, punctures included. The boundary of a
    /// union or intersection lies in the union of the argument boundaries.
    pub fn boundary_box(&self) -> Option<BBox> {
        match self {
            RegionSpec::Primitive(p) => p.boundary_box(),
            RegionSpec::Union(args) | RegionSpec::Intersection(args) => {
                let mut acc: Option<BBox> = None;
                for a in args {
                    let b = a.boundary_box()?;
                    acc = Some(acc.map_or(b, |x| x.union(&b)));
                }
                acc
            }
            RegionSpec::Complement(arg) => arg.boundary_box(),
        }
    }

    /// A radius `R` with `{ |z| > R }` contained in the region, if the region
    /// is a neighbourhood of infinity.
    pub fn infinity_radius(&self) -> Option<f64> {
        match self {
            RegionSpec::Primitive(p) => p.infinity_radius(),
            RegionSpec::Union(args) => args
                .iter()
                .filter_map(RegionSpec::infinity_radius)
                .reduce(f64::min),
            RegionSpec::Intersection(args) => {
                let mut acc = 0.0f64;
                for a in args {
                    acc = acc.max(a.infinity_radius()?);
                }
                Some(acc)
            }
            RegionSpec::Complement(arg) => arg.bounding_box().map(|b| b.radius()),
        }
    }

    pub fn contains_infinity(&self) -> bool {
        self.infinity_radius().is_some()
    }

    pub fn is_bounded(&self) -> bool {
        self.bounding_box().is_some()
    }

    /// Upper bound on `|z - about|` over boundary points `z`, when finite.
    pub fn boundary_radius(&self, about: Point) -> Option<f64> {
        // Both are valid bounds; neither dominates.
        let from_box = self.boundary_box().map(|b| b.radius_about(about));
        let from_infinity = self.infinity_radius().map(|r| r + about.norm());
        match (from_box, from_infinity) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// True iff the spherical complement of the region has at least three
    /// points.
    pub fn is_hyperbolic(&self) -> Result<bool> {
        self.validate()?;
        match self.complement_witness()? {
            ComplementWitness::Infinite => Ok(true),
            ComplementWitness::Finite(n) => Ok(n >= 3),
        }
    }

    fn complement_witness(&self) -> Result<ComplementWitness> {
        let mut disks = Vec::new();
        let mut segments = Vec::new();
        self.collect_witness_candidates(&mut disks, &mut segments);
        // Overlaps of primitives: midpoints of candidate centres, small radii.
        let base: Vec<(Point, f64)> = disks.iter().copied().take(32).collect();
        for (i, (c1, r1)) in base.iter().enumerate() {
            for (c2, r2) in &base[i + 1..] {
                disks.push(((*c1 + *c2) * 0.5, r1.min(*r2) / 16.0));
            }
        }
        let mut lines = Vec::new();
        self.collect_half_planes(&mut lines);
        lines.truncate(16);
        for (i, &(a1, n1)) in lines.iter().enumerate() {
            for &(a2, n2) in &lines[i + 1..] {
                half_plane_pair_probes(a1, n1, a2, n2, &mut disks);
            }
        }
        for scale in [1.0, 10.0, 100.0, 1000.0] {
            for k in 0..16 {
                let c = Point::from_polar(scale, k as f64 * PI / 8.0);
                disks.push((c, scale / 8.0));
            }
        }
        if disks.iter().any(|(c, r)| self.sdf(*c) >= *r) {
            return Ok(ComplementWitness::Infinite);
        }
        for (a, b) in &segments {
            let outside = (0..=32).all(|k| {
                let t = k as f64 / 32.0;
                !self.is_member(*a + (*b - *a) * t)
            });
            if outside {
                return Ok(ComplementWitness::Infinite);
            }
        }

        let mut points: Vec<Point> = Vec::new();
        self.collect_puncture_candidates(&mut points);
        self.collect_degenerate_segments(&mut points);
        let mut distinct: Vec<Point> = Vec::new();
        for q in points {
            if !self.is_member(q) && !distinct.contains(&q) {
                distinct.push(q);
            }
        }
        // Regions are plane sets: infinity is always an omitted point here.
        let n = distinct.len() + 1;
        // No finite boundary at all: the complement is {∞}.
        let unbounded_below = self.sdf(Point::ORIGIN) == f64::NEG_INFINITY;
        if n >= 3 || unbounded_below || self.only_point_primitives() {
            Ok(ComplementWitness::Finite(n))
        } else {
            Err(Error::Indeterminate(format!(
                "found {n} omitted points and no continuum in the complement"
            )))
        }
    }

    fn collect_half_planes(&self, out: &mut Vec<(Point, Point)>) {
        match self {
            RegionSpec::Primitive(Primitive::HalfPlane {
                anchor,
                inward_normal,
            }) => out.push((*anchor, *inward_normal)),
            RegionSpec::Primitive(_) => {}
            RegionSpec::Union(args) | RegionSpec::Intersection(args) => {
                args.iter().for_each(|a| a.collect_half_planes(out))
            }
            RegionSpec::Complement(arg) => arg.collect_half_planes(out),
        }
    }

    fn collect_witness_candidates(
        &self,
        disks: &mut Vec<(Point, f64)>,
        segs: &mut Vec<(Point, Point)>,
    ) {
        match self {
            RegionSpec::Primitive(p) => match p {
                Primitive::Disk { center, radius } => {
                    for k in 0..8 {
                        let dir = Point::from_polar(1.0, k as f64 * PI / 4.0);
                        disks.push((*center + dir * (3.0 * radius), radius * 0.5));
                    }
                    disks.push((*center, radius * 0.5));
                    disks.push((*center, radius / 16.0));
                }
                Primitive::HalfPlane {
                    anchor,
                    inward_normal,
                } => {
                    for t in [1.0, 10.0, 100.0, 1000.0] {
                        disks.push((*anchor - *inward_normal * t, 0.5 * t));
                    }
                }
                Primitive::DiskComplement { center, radius } => disks.push((*center, radius * 0.5)),
                Primitive::Segment { a, b } => {
                    if a != b {
                        segs.push((*a, *b));
                        disks.push(((*a + *b) * 0.5, a.dist(*b) * 0.25));
                    }
                }
                Primitive::PuncturedPlane { .. } | Primitive::FullPlane => {}
            },
            RegionSpec::Union(args) | RegionSpec::Intersection(args) => args
                .iter()
                .for_each(|a| a.collect_witness_candidates(disks, segs)),
            RegionSpec::Complement(arg) => arg.collect_witness_candidates(disks, segs),
        }
    }

    fn collect_degenerate_segments(&self, out: &mut Vec<Point>) {
        match self {
            RegionSpec::Primitive(Primitive::Segment { a, b }) if a == b => out.push(*a),
            RegionSpec::Primitive(_) => {}
            RegionSpec::Union(args) | RegionSpec::Intersection(args) => {
                args.iter().for_each(|a| a.collect_degenerate_segments(out))
            }
            RegionSpec::Complement(arg) => arg.collect_degenerate_segments(out),
        }
    }

    fn only_point_primitives(&self) -> bool {
        match self {
            RegionSpec::Primitive(Primitive::PuncturedPlane { .. })
            | RegionSpec::Primitive(Primitive::FullPlane) => true,
            RegionSpec::Primitive(Primitive::Segment { a, b }) => a == b,
            RegionSpec::Primitive(_) => false,
            RegionSpec::Union(args) | RegionSpec::Intersection(args) => {
                args.iter().all(RegionSpec::only_point_primitives)
            }
            RegionSpec::Complement(arg) => arg.only_point_primitives(),
        }
    }
}

/// Primitive realizing the signed distance at a point, and whether an odd
/// number of complements sits above it.
/// Probe disks in the four wedges cut out by two boundary lines, or in the
/// strip between them when they are nearly parallel. Each disk stays clear
/// of both lines.
fn half_plane_pair_probes(a1: Point, n1: Point, a2: Point, n2: Point, out: &mut Vec<(Point, f64)>) {
    let off = |p: Point, a: Point, n: Point| ((p - a).dot(n)).abs();
    let cross = n1.x * n2.y - n1.y * n2.x;
    if cross.abs() < 1e-9 {
        let m = (a1 + a2) * 0.5;
        let r = 0.5 * off(a2, a1, n1);
        if r > 0.0 {
            out.push((m, r));
        }
        return;
    }
    // Intersection v of (p − a1)·n1 = 0 and (p − a2)·n2 = 0.
    let (c1, c2) = (a1.dot(n1), a2.dot(n2));
    let v = Point::new(
        (c1 * n2.y - c2 * n1.y) / cross,
        (n1.x * c2 - n2.x * c1) / cross,
    );
    for d in [n1 + n2, n1 - n2, n2 - n1, (n1 + n2) * -1.0] {
        let len = d.norm();
        if len < 1e-12 {
            continue;
        }
        for t in [1e-2, 1.0, 10.0, 100.0, 1000.0] {
            let c = v + d * (t / len);
            let r = 0.5 * off(c, a1, n1).min(off(c, a2, n2));
            if r > 0.0 {
                out.push((c, r));
            }
        }
    }
}

struct Piece<'a> {
    sdf: f64,
    prim: Option<&'a Primitive>,
    flipped: bool,
    id: usize,
}

impl Primitive {
    /// log density of the side of this primitive's boundary containing `p`
    /// (`flipped` selects the complement side).
    fn side_model(&self, p: Point, flipped: bool) -> Option<f64> {
        let v = match (self, flipped) {
            (Primitive::Disk { center, radius }, false)
            | (Primitive::DiskComplement { center, radius }, true) => {
                let s = radius * radius - p.dist(*center).powi(2);
                (s > 0.0).then(|| 2.0 * radius / s)?
            }
            (Primitive::Disk { center, radius }, true)
            | (Primitive::DiskComplement { center, radius }, false) => {
                let s = p.dist(*center).powi(2) - radius * radius;
                (s > 0.0).then(|| 2.0 * radius / s)?
            }
            (
                Primitive::HalfPlane {
                    anchor,
                    inward_normal,
                },
                _,
            ) => {
                let mut d = (p - *anchor).dot(*inward_normal);
                if flipped {
                    d = -d;
                }
                (d > 0.0).then(|| 1.0 / d)?
            }
            (Primitive::Segment { a, b }, true) if a != b => {
                // Plane slit along the ray from the nearer endpoint e through
                // the segment: λ = 1/sqrt(2ρ(ρ − (p − e)·u)).
                let (e, other) = if p.dist(*a) <= p.dist(*b) {
                    (*a, *b)
                } else {
                    (*b, *a)
                };
                let u = (other - e) * (1.0 / other.dist(e));
                let rho = p.dist(e);
                let s = 2.0 * rho * (rho - (p - e).dot(u));
                (s > 0.0).then(|| 1.0 / s.sqrt())?
            }
            _ => return None,
        };
        (v.is_finite() && v > 0.0).then(|| v.ln())
    }
}
