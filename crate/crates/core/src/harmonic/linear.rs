//! Linear solvers for the Dirichlet problem restricted to free vertices.
//!
//! The system is `L_ff v_f = b` where `L_ff` is the weighted Laplacian
//! `pi(x) v(x) - sum_y c(x,y) v(y)` on free vertices and `b` collects the
//! conductances into clamped neighbours. With a connected network and a
//! nonempty clamped set, `L_ff` is symmetric positive definite.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::network::{Network, VertexId};

const NOT_FREE: usize = usize::MAX;

pub(crate) struct FreeSystem<'a> {
    net: &'a Network,
    /// vertex -> free index, or NOT_FREE when clamped
    slot: Vec<usize>,
    free: Vec<VertexId>,
    rhs: Vec<f64>,
}

impl<'a> FreeSystem<'a> {
    /// `source`, when given, adds a net current injection at free vertices:
    /// the equations become `(L v)(x) = source(x)`.
    pub(crate) fn new(net: &'a Network, values: &[f64], clamped: &[bool], source: Option<&[f64]>) -> Self {
        let mut slot = vec![NOT_FREE; net.vertex_count()];
        let mut free = Vec::new();
        for x in net.vertices() {
            if !clamped[x.0] {
                slot[x.0] = free.len();
                free.push(x);
            }
        }
        let rhs = free
            .iter()
            .map(|&x| {
                net.neighbors(x)
                    .iter()
                    .filter(|(y, _)| clamped[y.0])
                    .map(|&(y, e)| net.edge(e).c * values[y.0])
                    .sum::<f64>()
                    + source.map_or(0.0, |s| s[x.0])
            })
            .collect();
        FreeSystem { net, slot, free, rhs }
    }

    pub(crate) fn len(&self) -> usize {
        self.free.len()
    }

    pub(crate) fn free(&self) -> &[VertexId] {
        &self.free
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (i, &v) in self.free.iter().enumerate() {
            let mut acc = self.net.weight(v) * x[i];
            for &(y, e) in self.net.neighbors(v) {
                let j = self.slot[y.0];
                if j != NOT_FREE {
                    acc -= self.net.edge(e).c * x[j];
                }
            }
            out[i] = acc;
        }
    }

    /// Largest harmonic defect `|r(x)| / pi(x)` of a candidate solution.
    pub(crate) fn defect(&self, x: &[f64]) -> f64 {
        let mut ax = vec![0.0; self.len()];
        self.apply(x, &mut ax);
        self.scaled_max(&ax.iter().zip(&self.rhs).map(|(a, b)| b - a).collect::<Vec<_>>())
    }

    fn scaled_max(&self, r: &[f64]) -> f64 {
        r.iter()
            .zip(&self.free)
            .fold(0.0, |m, (ri, &v)| m.max(ri.abs() / self.net.weight(v)))
    }

    pub(crate) fn solve_dense(&self) -> Result<Vec<f64>> {
        let m = self.len();
        let mut a = DMatrix::<f64>::zeros(m, m);
        for (i, &v) in self.free.iter().enumerate() {
            a[(i, i)] = self.net.weight(v);
            for &(y, e) in self.net.neighbors(v) {
                let j = self.slot[y.0];
                if j != NOT_FREE {
                    a[(i, j)] -= self.net.edge(e).c;
                }
            }
        }
        let chol = a
            .cholesky()
            .ok_or(Error::SolverDivergence { iterations: 0, defect: f64::INFINITY })?;
        Ok(chol.solve(&DVector::from_column_slice(&self.rhs)).as_slice().to_vec())
    }

    /// Jacobi-preconditioned conjugate gradients, stopping on the harmonic
    /// defect. The recursive residual is re-anchored against the true one
    /// before accepting convergence.
    pub(crate) fn solve_cg(&self, mut x: Vec<f64>, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
        let m = self.len();
        let diag: Vec<f64> = self.free.iter().map(|&v| self.net.weight(v)).collect();
        let mut r = vec![0.0; m];
        let mut ap = vec![0.0; m];
        let true_residual = |x: &[f64], r: &mut [f64], ap: &mut [f64]| {
            self.apply(x, ap);
            for i in 0..m {
                r[i] = self.rhs[i] - ap[i];
            }
        };
        true_residual(&x, &mut r, &mut ap);
        let mut z: Vec<f64> = r.iter().zip(&diag).map(|(ri, d)| ri / d).collect();
        let mut p = z.clone();
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let mut defect = self.scaled_max(&r);
        let mut iterations = 0;
        while iterations < max_iter {
            if defect < tol {
                true_residual(&x, &mut r, &mut ap);
                defect = self.scaled_max(&r);
                if defect < tol {
                    return Ok(x);
                }
                // restart from the true residual
                for i in 0..m {
                    z[i] = r[i] / diag[i];
                }
                p.copy_from_slice(&z);
                rz = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            }
            self.apply(&p, &mut ap);
            let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
            if pap <= 0.0 || !pap.is_finite() {
                break;
            }
            let alpha = rz / pap;
            for i in 0..m {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            for i in 0..m {
                z[i] = r[i] / diag[i];
            }
            let rz_next: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_next / rz;
            rz = rz_next;
            for i in 0..m {
                p[i] = z[i] + beta * p[i];
            }
            defect = self.scaled_max(&r);
            iterations += 1;
        }
        true_residual(&x, &mut r, &mut ap);
        let defect = self.scaled_max(&r);
        if defect < tol {
            Ok(x)
        } else {
            Err(Error::SolverDivergence { iterations, defect })
        }
    }
}
