use std::io::Write;

use crate::error::{Error, Result};
use crate::grid::{Chart, Grid, NodeClass};
use crate::point::Point;
use crate::solver::newton::NewtonStep;

/// Solved chart log-density u on a grid (NaN on exterior nodes).
#[derive(Debug, Clone)]
pub struct LogDensityField {
    pub grid: Grid,
    pub u: Vec<f64>,
    pub residual_norm: f64,
    pub newton_iterations: usize,
    /// Residual tolerance actually applied.
    pub tolerance: f64,
    pub history: Vec<NewtonStep>,
}

impl LogDensityField {
    pub(crate) fn new(
        grid: Grid,
        u: Vec<f64>,
        residual_norm: f64,
        newton_iterations: usize,
        tolerance: f64,
        history: Vec<NewtonStep>,
    ) -> Self {
        LogDensityField {
            grid,
            u,
            residual_norm,
            newton_iterations,
            tolerance,
            history,
        }
    }

    /// Bilinear interpolation of u at a chart point.
    pub fn chart_log_density(&self, w: Point) -> Result<f64> {
        let g = &self.grid;
        let out = || Error::OutOfHull { x: w.x, y: w.y };
        if !w.is_finite() {
            return Err(out());
        }
        let fx = w.x / g.h - g.i0 as f64;
        let fy = w.y / g.h - g.j0 as f64;
        let i = fx.floor();
        let j = fy.floor();
        if i < 0.0 || j < 0.0 || i > (g.nx - 1) as f64 || j > (g.ny - 1) as f64 {
            return Err(out());
        }
        let (i, j) = (i as usize, j as usize);
        let (tx, ty) = (fx - i as f64, fy - j as f64);
        let mut acc = 0.0;
        for (di, dj, wgt) in [
            (0, 0, (1.0 - tx) * (1.0 - ty)),
            (1, 0, tx * (1.0 - ty)),
            (0, 1, (1.0 - tx) * ty),
            (1, 1, tx * ty),
        ] {
            if wgt == 0.0 {
                continue;
            }
            if i + di >= g.nx || j + dj >= g.ny {
                return Err(out());
            }
            let k = g.index(i + di, j + dj);
            if g.class[k] == NodeClass::Exterior {
                return Err(out());
            }
            acc += wgt * self.u[k];
        }
        Ok(acc)
    }

    /// Plane density λ(z).
    pub fn density_at(&self, z: Point) -> Result<f64> {
        let w = self
            .grid
            .chart
            .from_plane(z)
            .ok_or_else(|| Error::OutOfHull { x: z.x, y: z.y })?;
        let u = self.chart_log_density(w)?;
        Ok((u - self.grid.chart.log_jacobian(w)).exp())
    }

    /// Chart-intrinsic density μ(0) at z = ∞ (inversion chart only).
    pub fn density_at_infinity(&self) -> Result<f64> {
        if !matches!(self.grid.chart, Chart::Inversion { .. }) {
            return Err(Error::Precondition(
                "density at infinity needs the inversion chart".into(),
            ));
        }
        let k = self
            .grid
            .node_at(Point::ORIGIN)
            .filter(|&k| self.grid.class[k] != NodeClass::Exterior)
            .ok_or(Error::OutOfHull {
                x: f64::INFINITY,
                y: f64::INFINITY,
            })?;
        Ok(self.u[k].exp())
    }

    /// Writes `# chart=…`, a `x,y,u,lambda` header, and one row per
    /// non-exterior node in row-major order; coordinates and densities are
    /// in the solve chart.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# chart={}", self.grid.chart.name())?;
        writeln!(out, "x,y,u,lambda")?;
        for k in 0..self.grid.len() {
            if self.grid.class[k] == NodeClass::Exterior {
                continue;
            }
            let p = self.grid.node(k);
            let u = self.u[k];
            writeln!(out, "{:e},{:e},{:e},{:e}", p.x, p.y, u, u.exp())?;
        }
        Ok(())
    }
}
