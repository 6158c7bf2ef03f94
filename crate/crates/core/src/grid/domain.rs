use crate::error::Result;
use crate::geometry::RegionSpec;
use crate::point::{BBox, Point};

/// What the discretizer and solver need to know about an open plane set.
pub trait Domain: Sync {
    fn contains(&self, z: Point) -> bool;

    /// True when the set contains `{ |z| > R }` for some R.
    fn contains_infinity(&self) -> bool;

    /// Distance to the boundary, counting isolated punctures; a lower bound
    /// for boolean combinations.
    fn distance(&self, z: Point) -> f64;

    /// Distance to the boundary ignoring isolated punctures (∞ if there is
    /// no other boundary).
    fn smooth_distance(&self, z: Point) -> f64;

    /// Signed curvature of the nearest smooth boundary piece, positive where
    /// the set is locally convex.
    fn boundary_curvature(&self, z: Point) -> f64;

    /// Identifier of the smooth boundary piece nearest to `z`; the model
    /// boundary data is smooth where this is locally constant.
    fn boundary_piece(&self, z: Point) -> usize;

    /// Exact log density of a simple domain sharing the nearest smooth
    /// boundary piece, where one is known. The curvature model is used
    /// otherwise.
    fn boundary_model(&self, _z: Point) -> Option<f64> {
        None
    }

    fn punctures(&self) -> Vec<Point>;

    /// Bounding box of the closure, if bounded.
    fn bounding_box(&self) -> Option<BBox>;

    /// Upper bound on |b − about| over boundary points b.
    fn boundary_radius(&self, about: Point) -> Option<f64>;

    fn is_hyperbolic(&self) -> Result<bool>;
}

impl Domain for RegionSpec {
    fn contains(&self, z: Point) -> bool {
        self.is_member(z)
    }

    fn contains_infinity(&self) -> bool {
        RegionSpec::contains_infinity(self)
    }

    fn distance(&self, z: Point) -> f64 {
        -self.sdf(z)
    }

    fn smooth_distance(&self, z: Point) -> f64 {
        RegionSpec::smooth_distance(self, z)
    }

    fn boundary_curvature(&self, z: Point) -> f64 {
        RegionSpec::boundary_curvature(self, z)
    }

    fn boundary_piece(&self, z: Point) -> usize {
        RegionSpec::boundary_piece(self, z)
    }

    fn boundary_model(&self, z: Point) -> Option<f64> {
        RegionSpec::boundary_model(self, z)
    }

    fn punctures(&self) -> Vec<Point> {
        RegionSpec::punctures(self)
    }

    fn bounding_box(&self) -> Option<BBox> {
        RegionSpec::bounding_box(self)
    }

    fn boundary_radius(&self, about: Point) -> Option<f64> {
        RegionSpec::boundary_radius(self, about)
    }

    fn is_hyperbolic(&self) -> Result<bool> {
        RegionSpec::is_hyperbolic(self)
    }
}

/// `{ z ∈ Ω : dist(z, ∂Ω) > δ }`, with punctures counted as boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Eroded {
    pub inner: RegionSpec,
    pub delta: f64,
}

pub fn erode(region: &RegionSpec, delta: f64) -> Eroded {
    Eroded {
        inner: region.clone(),
        delta,
    }
}

impl Domain for Eroded {
    fn contains(&self, z: Point) -> bool {
        -self.inner.sdf(z) > self.delta
    }

    fn contains_infinity(&self) -> bool {
        self.inner.contains_infinity()
    }

    fn distance(&self, z: Point) -> f64 {
        -self.inner.sdf(z) - self.delta
    }

    fn smooth_distance(&self, z: Point) -> f64 {
        self.distance(z)
    }

    fn boundary_curvature(&self, z: Point) -> f64 {
        let d = -self.inner.sdf(z);
        if d < self.inner.smooth_distance(z) {
            // Nearest boundary is a puncture: the eroded boundary is a circle
            // of radius δ seen from outside.
            return -1.0 / self.delta;
        }
        let k = self.inner.boundary_curvature(z);
        k / (1.0 - k * self.delta)
    }

    fn boundary_piece(&self, z: Point) -> usize {
        let d = -self.inner.sdf(z);
        if d < self.inner.smooth_distance(z) {
            // Offset circles around punctures are separate pieces.
            let q = self
                .inner
                .punctures()
                .iter()
                .enumerate()
                .min_by(|a, b| z.dist(*a.1).total_cmp(&z.dist(*b.1)))
                .map_or(0, |(i, _)| i);
            return usize::MAX - q;
        }
        self.inner.boundary_piece(z)
    }

    fn punctures(&self) -> Vec<Point> {
        Vec::new()
    }

    fn bounding_box(&self) -> Option<BBox> {
        self.inner.bounding_box()
    }

    fn boundary_radius(&self, about: Point) -> Option<f64> {
        self.inner.boundary_radius(about).map(|r| r + self.delta)
    }

    fn is_hyperbolic(&self) -> Result<bool> {
        // Removing the closed δ-neighbourhood of a nonempty boundary leaves a
        // continuum outside the set.
        if self.delta > 0.0 && self.inner.sdf(Point::ORIGIN).is_finite() {
            return Ok(true);
        }
        self.inner.is_hyperbolic()
    }
}
