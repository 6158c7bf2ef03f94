use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::point::Point;

/// Holomorphic maps used to transport closed-form metrics.
#[derive(Debug, Clone, PartialEq)]
pub enum ConformalPrimitive {
    /// z ↦ a z + b, a ≠ 0.
    Affine { a: Complex64, b: Complex64 },
    /// z ↦ z^α on the plane slit along the negative real axis (principal branch).
    PowerMap { alpha: f64 },
    /// z ↦ (a z + b)/(c z + d), ad − bc ≠ 0.
    Moebius {
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
    },
    /// z ↦ z + 1/z on |z| > 1.
    Joukowski,
    /// Maps applied in order: the first entry acts first.
    Composition(Vec<ConformalPrimitive>),
}

impl ConformalPrimitive {
    pub fn identity() -> Self {
        ConformalPrimitive::Affine {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    pub fn translation(b: Point) -> Self {
        ConformalPrimitive::Affine {
            a: Complex64::new(1.0, 0.0),
            b: b.to_complex(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInput(m.to_string()));
        match self {
            ConformalPrimitive::Affine { a, b } => {
                if a.norm() == 0.0 || !a.is_finite() || !b.is_finite() {
                    return bad("affine map needs finite a ≠ 0 and finite b");
                }
            }
            ConformalPrimitive::PowerMap { alpha } => {
                if !(alpha.is_finite() && *alpha > 0.0) {
                    return bad("power map exponent must be positive");
                }
            }
            ConformalPrimitive::Moebius { a, b, c, d } => {
                if (a * d - b * c).norm() == 0.0 {
                    return bad("Möbius map needs ad − bc ≠ 0");
                }
            }
            ConformalPrimitive::Joukowski => {}
            ConformalPrimitive::Composition(maps) => maps.iter().try_for_each(|m| m.validate())?,
        }
        Ok(())
    }

    /// Image and complex derivative at `z`.
    pub fn eval(&self, z: Point) -> Result<(Point, Complex64)> {
        let zc = z.to_complex();
        match self {
            ConformalPrimitive::Affine { a, b } => Ok(((a * zc + b).into(), *a)),
            ConformalPrimitive::PowerMap { alpha } => {
                let (r, t) = zc.to_polar();
                if r == 0.0 || t.abs() >= PI {
                    return Err(Error::domain(z, "outside the power map's slit plane"));
                }
                let w = Complex64::from_polar(r.powf(*alpha), alpha * t);
                Ok((w.into(), alpha * w / zc))
            }
            ConformalPrimitive::Moebius { a, b, c, d } => {
                let den = c * zc + d;
                if den.norm() == 0.0 {
                    return Err(Error::domain(z, "pole of the Möbius map"));
                }
                Ok((((a * zc + b) / den).into(), (a * d - b * c) / (den * den)))
            }
            ConformalPrimitive::Joukowski => {
                if zc.norm() <= 1.0 {
                    return Err(Error::domain(z, "Joukowski map is used on |z| > 1"));
                }
                let inv = zc.inv();
                Ok(((zc + inv).into(), 1.0 - inv * inv))
            }
            ConformalPrimitive::Composition(maps) => {
                let mut w = z;
                let mut dw = Complex64::new(1.0, 0.0);
                for m in maps {
                    let (next, d) = m.eval(w)?;
                    w = next;
                    dw *= d;
                }
                Ok((w, dw))
            }
        }
    }

    pub fn apply(&self, z: Point) -> Result<Point> {
        self.eval(z).map(|(w, _)| w)
    }

    pub fn derivative(&self, z: Point) -> Result<Complex64> {
        self.eval(z).map(|(_, d)| d)
    }
}
