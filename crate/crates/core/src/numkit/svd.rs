//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.
//!
//! Columns of `A V` are orthogonalized pairwise until every pair is
//! orthogonal to working precision; their norms are the singular values.
//! Accurate for the small dense matrices this crate targets, including
//! tiny singular values.

use super::matrix::{ComplexMatrix, C64};
use super::Tolerance;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

#[derive(Debug, Clone)]
pub struct Svd {
    /// `m x m` unitary.
    pub u: ComplexMatrix,
    /// Nonincreasing, length `min(m, n)`.
    pub sigma: Vec<f64>,
    /// `n x n` unitary.
    pub v: ComplexMatrix,
}

impl Svd {
    /// `u · diag(sigma) · v*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        let mut us = ComplexMatrix::zeros(m, n);
        for (k, &s) in self.sigma.iter().enumerate() {
            for i in 0..m {
                us[(i, k)] = self.u[(i, k)] * s;
            }
        }
        &us * &self.v.conj_transpose()
    }
}

/// Full SVD `a = u · diag(sigma) · v*`.
///
/// The tolerance is accepted for interface uniformity; convergence is
/// always driven to machine precision.
pub fn svd(a: &ComplexMatrix, _tol: &Tolerance) -> Result<Svd> {
    if a.rows() >= a.cols() {
        jacobi_tall(a)
    } else {
        let t = jacobi_tall(&a.conj_transpose())?;
        Ok(Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        })
    }
}

fn jacobi_tall(a: &ComplexMatrix) -> Result<Svd> {
    let (m, n) = a.shape();
    // Column-major working copies.
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    let mut vcols: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    let eps = f64::EPSILON;
    // Columns below this norm are rounding noise; rotating against them
    // can cycle without ever meeting the orthogonality test.
    let total: f64 = cols.iter().flatten().map(|z| z.norm_sqr()).sum();
    let negligible = eps * eps * total;
    let mut converged = n < 2;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                algorithm: "Jacobi SVD",
                iterations: sweeps,
            });
        }
        sweeps += 1;
        converged = true;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() || alpha.min(beta) <= negligible {
                    continue;
                }
                converged = false;
                // Rotate the pair (a_p, e^{-iφ} a_q), which has a real inner product.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, phase, c, s);
                rotate(&mut vcols, p, q, phase, c, s);
            }
        }
    }

    let norms: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();

    let mut v = ComplexMatrix::zeros(n, n);
    for (k, &j) in order.iter().enumerate() {
        for i in 0..n {
            v[(i, k)] = vcols[j][i];
        }
    }

    // Left singular vectors for the numerically nonzero columns, then an
    // orthonormal completion to a full m x m unitary.
    let floor = (2.0 * negligible.sqrt()).max(f64::MIN_POSITIVE * 1e8);
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(m);
    for (k, &j) in order.iter().enumerate() {
        if sigma[k] > floor {
            let inv = 1.0 / sigma[k];
            basis.push(cols[j].iter().map(|z| z * inv).collect());
        } else {
            break;
        }
    }
    let mut basis = complete_basis(basis, m);
    let mut u = ComplexMatrix::zeros(m, m);
    for (k, col) in basis.drain(..).enumerate() {
        for i in 0..m {
            u[(i, k)] = col[i];
        }
    }

    Ok(Svd { u, sigma, v })
}

fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, phase: C64, c: f64, s: f64) {
    let conj_phase = phase.conj();
    let (lo, hi) = cols.split_at_mut(q);
    let cp = &mut lo[p];
    let cq = &mut hi[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yq = *y * conj_phase;
        let xp = *x;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}

/// Extends orthonormal vectors to an orthonormal basis of `C^m` using
/// Gram–Schmidt (applied twice) on the standard basis.
pub(crate) fn complete_basis(mut basis: Vec<Vec<C64>>, m: usize) -> Vec<Vec<C64>> {
    let mut e = 0;
    while basis.len() < m && e < m {
        let mut w = vec![C64::new(0.0, 0.0); m];
        w[e] = C64::new(1.0, 0.0);
        e += 1;
        for _ in 0..2 {
            for b in &basis {
                let proj: C64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= proj * bi;
                }
            }
        }
        let nrm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm > 1e-8 {
            basis.push(w.into_iter().map(|z| z / nrm).collect());
        }
    }
    debug_assert_eq!(basis.len(), m);
    basis
}
