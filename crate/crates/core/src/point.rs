use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A finite point of the plane, identified with `x + iy`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        Point::new(r * theta.cos(), r * theta.sin())
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sqr(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Rotation by +90 degrees.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn from_complex(z: Complex64) -> Self {
        Point::new(z.re, z.im)
    }

    /// Distance from `self` to the closed segment `[a, b]`.
    pub fn dist_to_segment(self, a: Point, b: Point) -> f64 {
        let ab = b - a;
        let len2 = ab.norm_sqr();
        if len2 == 0.0 {
            return self.dist(a);
        }
        let t = ((self - a).dot(ab) / len2).clamp(0.0, 1.0);
        self.dist(a + ab * t)
    }
}

impl From<Complex64> for Point {
    fn from(z: Complex64) -> Self {
        Point::from_complex(z)
    }
}

impl From<Point> for Complex64 {
    fn from(p: Point) -> Self {
        p.to_complex()
    }
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point::new(a[0], a[1])
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Axis-aligned rectangle `[xmin, xmax] x [ymin, ymax]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl BBox {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Self {
        BBox {
            xmin,
            xmax,
            ymin,
            ymax,
        }
    }

    pub fn square(half_width: f64) -> Self {
        BBox::new(-half_width, half_width, -half_width, half_width)
    }

    pub fn is_valid(&self) -> bool {
        [self.xmin, self.xmax, self.ymin, self.ymax]
            .iter()
            .all(|v| v.is_finite())
            && self.xmin < self.xmax
            && self.ymin < self.ymax
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }

    pub fn union(&self, o: &BBox) -> BBox {
        BBox::new(
            self.xmin.min(o.xmin),
            self.xmax.max(o.xmax),
            self.ymin.min(o.ymin),
            self.ymax.max(o.ymax),
        )
    }

    pub fn intersect(&self, o: &BBox) -> BBox {
        BBox::new(
            self.xmin.max(o.xmin),
            self.xmax.min(o.xmax),
            self.ymin.max(o.ymin),
            self.ymax.min(o.ymax),
        )
    }

    pub fn expand(&self, margin: f64) -> BBox {
        BBox::new(
            self.xmin - margin,
            self.xmax + margin,
            self.ymin - margin,
            self.ymax + margin,
        )
    }

    /// Largest distance from the origin to a corner.
    pub fn radius(&self) -> f64 {
        let xs = self.xmin.abs().max(self.xmax.abs());
        let ys = self.ymin.abs().max(self.ymax.abs());
        xs.hypot(ys)
    }

    /// Largest distance from `about` to a point of the box.
    pub fn radius_about(&self, about: Point) -> f64 {
        let xs = (self.xmin - about.x).abs().max((self.xmax - about.x).abs());
        let ys = (self.ymin - about.y).abs().max((self.ymax - about.y).abs());
        xs.hypot(ys)
    }
}
