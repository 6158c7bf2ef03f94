//! Symmetric positive definite solves for the Newton systems
//! (4 + h²·c_k) x_k − Σ_neighbours x_n = b_k on the interior unknowns,
//! by conjugate gradients with a modified incomplete Cholesky preconditioner.

use rayon::prelude::*;

use crate::error::{Error, Result};

pub(crate) const NONE: u32 = u32::MAX;

/// Five-point connectivity of the unknowns: west, east, south, north.
/// Unknowns are numbered in row-major node order, so west and south
/// neighbours always have smaller indices.
#[derive(Debug, Clone)]
pub(crate) struct Stencil {
    pub nbr: Vec<[u32; 4]>,
}

const CHUNK: usize = 4096;
const MIC_TAU: f64 = 0.97;
const MIC_SIGMA: f64 = 0.25;

/// Chunked dot product whose result does not depend on the thread count.
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let parts: Vec<f64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>())
        .collect();
    parts.iter().sum()
}

pub(crate) struct System<'a> {
    pub stencil: &'a Stencil,
    pub diag: Vec<f64>,
}

impl System<'_> {
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let nbr = &self.stencil.nbr;
        y.par_iter_mut().enumerate().for_each(|(k, yk)| {
            let mut s = self.diag[k] * x[k];
            for &n in &nbr[k] {
                if n != NONE {
                    s -= x[n as usize];
                }
            }
            *yk = s;
        });
    }

    /// Inverse square roots of the MIC(0) pivots.
    fn mic(&self) -> Vec<f64> {
        let nbr = &self.stencil.nbr;
        let n = self.diag.len();
        let mut prec = vec![0.0; n];
        for k in 0..n {
            let a = self.diag[k];
            let mut e = a;
            let [w, _, s, _] = nbr[k];
            if w != NONE {
                let w = w as usize;
                let pw = prec[w];
                e -= pw * pw;
                if nbr[w][3] != NONE {
                    e -= MIC_TAU * pw * pw;
                }
            }
            if s != NONE {
                let s = s as usize;
                let ps = prec[s];
                e -= ps * ps;
                if nbr[s][1] != NONE {
                    e -= MIC_TAU * ps * ps;
                }
            }
            if e < MIC_SIGMA * a {
                e = a;
            }
            prec[k] = 1.0 / e.sqrt();
        }
        prec
    }

    fn precondition(&self, prec: &[f64], r: &[f64], z: &mut [f64]) {
        let nbr = &self.stencil.nbr;
        let n = r.len();
        for k in 0..n {
            let mut t = r[k];
            let [w, _, s, _] = nbr[k];
            if w != NONE {
                t += prec[w as usize] * z[w as usize];
            }
            if s != NONE {
                t += prec[s as usize] * z[s as usize];
            }
            z[k] = t * prec[k];
        }
        for k in (0..n).rev() {
            let mut t = z[k];
            let [_, e, _, nn] = nbr[k];
            if e != NONE {
                t += prec[k] * z[e as usize];
            }
            if nn != NONE {
                t += prec[k] * z[nn as usize];
            }
            z[k] = t * prec[k];
        }
    }

    /// Solves A x = b to relative true residual `tol`, returning the achieved
    /// relative residual.
    pub fn solve(&self, b: &[f64], x: &mut [f64], tol: f64) -> Result<f64> {
        let n = b.len();
        let bnorm = dot(b, b).sqrt();
        x.iter_mut().for_each(|v| *v = 0.0);
        if bnorm == 0.0 {
            return Ok(0.0);
        }
        let prec = self.mic();
        let mut r = b.to_vec();
        let mut z = vec![0.0; n];
        let mut p = vec![0.0; n];
        let mut q = vec![0.0; n];
        let max_iter = 20 * (n as f64).sqrt() as usize + 200;
        let mut best = f64::INFINITY;
        for _restart in 0..4 {
            self.precondition(&prec, &r, &mut z);
            p.copy_from_slice(&z);
            let mut rz = dot(&r, &z);
            for _ in 0..max_iter {
                self.apply(&p, &mut q);
                let pq = dot(&p, &q);
                if !(pq > 0.0) {
                    return Err(Error::SingularSystem(format!(
                        "non-positive curvature pᵀAp = {pq}"
                    )));
                }
                let alpha = rz / pq;
                x.par_iter_mut()
                    .zip(&p)
                    .for_each(|(xi, pi)| *xi += alpha * pi);
                r.par_iter_mut()
                    .zip(&q)
                    .for_each(|(ri, qi)| *ri -= alpha * qi);
                if dot(&r, &r).sqrt() <= 0.1 * tol * bnorm {
                    break;
                }
                self.precondition(&prec, &r, &mut z);
                let rz_new = dot(&r, &z);
                let beta = rz_new / rz;
                rz = rz_new;
                p.par_iter_mut()
                    .zip(&z)
                    .for_each(|(pi, zi)| *pi = zi + beta * *pi);
            }
            // Recompute the true residual and restart from it if needed.
            self.apply(x, &mut q);
            r.par_iter_mut()
                .zip(b.par_iter().zip(&q))
                .for_each(|(ri, (bi, qi))| *ri = bi - qi);
            let rel = dot(&r, &r).sqrt() / bnorm;
            if !rel.is_finite() {
                return Err(Error::SingularSystem("non-finite residual".into()));
            }
            if rel <= tol {
                return Ok(rel);
            }
            if rel >= 0.5 * best {
                best = best.min(rel);
                break;
            }
            best = rel;
        }
        if best <= STAGNATION_ACCEPT {
            Ok(best)
        } else {
            Err(Error::SingularSystem(format!(
                "linear solve stalled at relative residual {best:e}"
            )))
        }
    }
}

/// Round-off stagnation level accepted when 1e-12 cannot be reached.
const STAGNATION_ACCEPT: f64 = 1e-9;
