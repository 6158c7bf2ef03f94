//! Uniform grids over a region in the identity chart z or the inversion
//! chart w = 1/(z − c), with node classification for the Liouville solver.

mod domain;

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

pub use domain::{erode, Domain, Eroded};

use crate::error::{Error, Result};
use crate::point::{BBox, Point};

/// Coordinate chart on the sphere used for a solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Chart {
    Identity,
    /// w = 1/(z − center); w = 0 is the point at infinity. Densities
    /// transform as μ(w) = λ(z)/|w|².
    Inversion {
        center: Point,
    },
}

impl Chart {
    pub fn inversion() -> Self {
        Chart::Inversion {
            center: Point::ORIGIN,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Chart::Identity => "identity",
            Chart::Inversion { .. } => "inversion",
        }
    }

    /// Plane point of a chart point; `None` for the point at infinity.
    pub fn to_plane(&self, w: Point) -> Option<Point> {
        match self {
            Chart::Identity => Some(w),
            Chart::Inversion { center } => {
                let s = w.norm_sqr();
                if s == 0.0 {
                    None
                } else {
                    Some(*center + Point::new(w.x / s, -w.y / s))
                }
            }
        }
    }

    /// Chart point of a plane point; `None` for the inversion center.
    pub fn from_plane(&self, z: Point) -> Option<Point> {
        match self {
            Chart::Identity => Some(z),
            Chart::Inversion { center } => {
                let d = z - *center;
                let s = d.norm_sqr();
                if s == 0.0 {
                    None
                } else {
                    Some(Point::new(d.x / s, -d.y / s))
                }
            }
        }
    }

    /// log of the factor turning a plane density into a chart density:
    /// log μ(w) = log λ(z) + log_jacobian(w).
    pub fn log_jacobian(&self, w: Point) -> f64 {
        match self {
            Chart::Identity => 0.0,
            Chart::Inversion { .. } => -w.norm_sqr().ln(),
        }
    }

    /// Lower bound on the chart distance from `w` to boundary points lying at
    /// plane distance ≥ `dz` from z = to_plane(w), all within `radius` of the
    /// inversion center.
    pub fn distance_lower_bound(&self, w: Point, dz: f64, radius: Option<f64>) -> f64 {
        match self {
            Chart::Identity => dz,
            Chart::Inversion { .. } => {
                let rw = w.norm();
                let rb = radius.unwrap_or(f64::INFINITY);
                if rw == 0.0 {
                    return 1.0 / rb;
                }
                if dz.is_infinite() {
                    return f64::INFINITY;
                }
                let zr = 1.0 / rw;
                let a = dz / (zr * (zr + dz));
                let b = dz / (zr * rb);
                a.max(b)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeClass {
    Exterior,
    Interior,
    /// Within 2h of the smooth boundary, or next to an exterior node.
    Band,
    /// Within the excision radius of a puncture.
    Ring,
    /// In-region node on the outer frame of a truncated grid.
    Edge,
}

impl NodeClass {
    pub fn is_fixed(self) -> bool {
        matches!(self, NodeClass::Band | NodeClass::Ring | NodeClass::Edge)
    }
}

/// Nodes sit at integer multiples of `h`, so grids with the same spacing
/// share nodes and the chart origin is always a node.
#[derive(Debug, Clone)]
pub struct Grid {
    pub chart: Chart,
    pub h: f64,
    pub i0: i64,
    pub j0: i64,
    pub nx: usize,
    pub ny: usize,
    pub class: Vec<NodeClass>,
    pub ring_radius: f64,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn coords(&self, k: usize) -> (usize, usize) {
        (k % self.nx, k / self.nx)
    }

    /// Chart coordinates of node `k`.
    pub fn node(&self, k: usize) -> Point {
        let (i, j) = self.coords(k);
        Point::new(
            (self.i0 + i as i64) as f64 * self.h,
            (self.j0 + j as i64) as f64 * self.h,
        )
    }

    pub fn plane_point(&self, k: usize) -> Option<Point> {
        self.chart.to_plane(self.node(k))
    }

    /// West, east, south, north neighbours.
    pub fn neighbors(&self, k: usize) -> [Option<usize>; 4] {
        let (i, j) = self.coords(k);
        [
            (i > 0).then(|| k - 1),
            (i + 1 < self.nx).then(|| k + 1),
            (j > 0).then(|| k - self.nx),
            (j + 1 < self.ny).then(|| k + self.nx),
        ]
    }

    /// Span of the nodes in chart coordinates.
    pub fn bbox(&self) -> BBox {
        let x0 = self.i0 as f64 * self.h;
        let y0 = self.j0 as f64 * self.h;
        BBox::new(
            x0,
            x0 + (self.nx - 1) as f64 * self.h,
            y0,
            y0 + (self.ny - 1) as f64 * self.h,
        )
    }

    pub fn count(&self, class: NodeClass) -> usize {
        self.class.iter().filter(|c| **c == class).count()
    }

    /// Node nearest to a chart point, if the point lies in the node span.
    pub fn nearest(&self, w: Point) -> Option<usize> {
        let fi = (w.x / self.h).round() as i64 - self.i0;
        let fj = (w.y / self.h).round() as i64 - self.j0;
        if fi < 0 || fj < 0 || fi >= self.nx as i64 || fj >= self.ny as i64 {
            return None;
        }
        Some(self.index(fi as usize, fj as usize))
    }

    /// Node at exactly the given chart position (up to round-off).
    pub fn node_at(&self, w: Point) -> Option<usize> {
        let k = self.nearest(w)?;
        (self.node(k).dist(w) <= 1e-9 * self.h).then_some(k)
    }
}

const ON_BOUNDARY: f64 = 1e-12;

fn node_range(lo: f64, hi: f64, h: f64) -> Result<(i64, usize)> {
    let a = (lo / h).ceil();
    let b = (hi / h).floor();
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::EmptyGrid);
    }
    let n = (b - a) as usize + 1;
    if n > 1 << 15 {
        return Err(Error::InvalidInput(format!(
            "grid would have {n} nodes per side"
        )));
    }
    Ok((a as i64, n))
}

/// Chart distance from node `w` to the smooth boundary.
pub(crate) fn chart_smooth_distance(
    domain: &dyn Domain,
    chart: &Chart,
    w: Point,
    radius: Option<f64>,
) -> f64 {
    match chart.to_plane(w) {
        Some(z) => chart.distance_lower_bound(w, domain.smooth_distance(z), radius),
        None => chart.distance_lower_bound(w, f64::INFINITY, radius),
    }
}

/// Chart distance from node `w` to the full boundary, punctures included.
pub(crate) fn chart_distance(
    domain: &dyn Domain,
    chart: &Chart,
    w: Point,
    radius: Option<f64>,
) -> f64 {
    match chart.to_plane(w) {
        Some(z) => chart.distance_lower_bound(w, domain.distance(z), radius),
        None => chart.distance_lower_bound(w, f64::INFINITY, radius),
    }
}

/// Discretizes `domain` over `bbox` (chart coordinates).
///
/// In the identity chart the domain must be bounded and the grid must cover
/// it; in the inversion chart the domain must contain a neighbourhood of ∞
/// and the center must lie outside the domain. In-domain nodes on the frame
/// become `Edge` nodes in the inversion chart (truncation near the center).
pub fn discretize(domain: &dyn Domain, chart: Chart, bbox: BBox, h: f64) -> Result<Grid> {
    if !domain.is_hyperbolic()? {
        return Err(Error::Precondition("domain is not hyperbolic".into()));
    }
    match chart {
        Chart::Identity => {
            if domain.bounding_box().is_none() {
                return Err(Error::Precondition(
                    "unbounded domain: use the inversion chart".into(),
                ));
            }
        }
        Chart::Inversion { center } => {
            if !domain.contains_infinity() {
                return Err(Error::Precondition(
                    "inversion chart needs a domain containing a neighbourhood of infinity".into(),
                ));
            }
            if domain.contains(center) {
                return Err(Error::Precondition(
                    "inversion center must lie outside the domain".into(),
                ));
            }
        }
    }
    let grid = classify(domain, chart, bbox, h)?;
    if chart == Chart::Identity && grid.count(NodeClass::Edge) > 0 {
        return Err(Error::Precondition(
            "grid does not cover the domain; enlarge the bbox or use discretize_window".into(),
        ));
    }
    Ok(grid)
}

/// Identity-chart grid over a window of a possibly unbounded domain. Frame
/// nodes inside the domain are `Edge` nodes whose values the caller supplies.
pub fn discretize_window(domain: &dyn Domain, bbox: BBox, h: f64) -> Result<Grid> {
    classify(domain, Chart::Identity, bbox, h)
}

fn classify(domain: &dyn Domain, chart: Chart, bbox: BBox, h: f64) -> Result<Grid> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidInput(format!(
            "spacing must be positive, got {h}"
        )));
    }
    if !bbox.is_valid() {
        return Err(Error::InvalidInput("invalid bbox".into()));
    }
    let (i0, nx) = node_range(bbox.xmin, bbox.xmax, h)?;
    let (j0, ny) = node_range(bbox.ymin, bbox.ymax, h)?;
    let ring_radius = 4.0 * h;
    let radius = match chart {
        Chart::Identity => None,
        Chart::Inversion { center } => domain.boundary_radius(center),
    };
    let rings: Vec<Point> = domain
        .punctures()
        .into_iter()
        .filter_map(|q| chart.from_plane(q))
        .collect();
    let mut grid = Grid {
        chart,
        h,
        i0,
        j0,
        nx,
        ny,
        class: Vec::new(),
        ring_radius,
    };
    let member: Vec<bool> = (0..grid.len())
        .into_par_iter()
        .map(|k| match grid.plane_point(k) {
            // Nodes within round-off of the boundary count as boundary points.
            Some(z) => domain.contains(z) && domain.distance(z) > ON_BOUNDARY * z.norm().max(1.0),
            None => domain.contains_infinity(),
        })
        .collect();
    let class: Vec<NodeClass> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            if !member[k] {
                return NodeClass::Exterior;
            }
            let w = grid.node(k);
            if rings.iter().any(|q| w.dist(*q) <= ring_radius) {
                return NodeClass::Ring;
            }
            let nb = grid.neighbors(k);
            if nb.iter().any(Option::is_none) {
                return NodeClass::Edge;
            }
            if chart_smooth_distance(domain, &chart, w, radius) <= 2.0 * h {
                return NodeClass::Band;
            }
            if nb.iter().flatten().any(|&n| !member[n]) {
                return NodeClass::Band;
            }
            NodeClass::Interior
        })
        .collect();
    grid.class = class;
    if grid.count(NodeClass::Interior) == 0 {
        return Err(Error::EmptyGrid);
    }
    Ok(grid)
}

/// Nodes 4-connected to the node nearest `seed` through non-exterior nodes.
pub fn component_mask(grid: &Grid, seed: Point) -> Result<Vec<bool>> {
    let start = grid
        .nearest(seed)
        .filter(|&k| grid.class[k] != NodeClass::Exterior)
        .ok_or_else(|| Error::domain(seed, "seed is not at a region node"))?;
    let mut mask = vec![false; grid.len()];
    let mut queue = VecDeque::from([start]);
    mask[start] = true;
    while let Some(k) = queue.pop_front() {
        for n in grid.neighbors(k).into_iter().flatten() {
            if !mask[n] && grid.class[n] != NodeClass::Exterior {
                mask[n] = true;
                queue.push_back(n);
            }
        }
    }
    Ok(mask)
}

#[cfg(test)]
mod tests;
