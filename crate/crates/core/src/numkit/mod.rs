//! Dense complex linear algebra with an explicit tolerance policy.
//!
//! Every rank decision and every matrix-identity comparison in the crate goes
//! through [`Tolerance`]; the factorizations themselves ([`svd`],
//! [`ordered_schur`], [`qr`]) live only in this module.

mod lu;
mod matrix;
mod qr;
mod schur;
mod svd;

pub use lu::{inverse_of_nonsingular, solve_upper_triangular};
pub use matrix::{ComplexMatrix, C64};
pub use qr::qr;
pub use schur::{ordered_schur, ordered_schur_leading, OrderedSchur};
pub use svd::{svd, Svd};

use crate::error::{Error, Result};

/// Numeric policy threaded through every operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative singular-value (and eigenvalue-modulus) cutoff.
    pub rank_rel: f64,
    /// Absolute part of the identity-comparison threshold.
    pub eq_abs: f64,
    /// Relative part of the identity-comparison threshold, scaled by the
    /// larger operand's max-entry norm.
    pub eq_rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rank_rel: 1e-10,
            eq_abs: 1e-9,
            eq_rel: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn new(rank_rel: f64, eq_abs: f64, eq_rel: f64) -> Result<Self> {
        for (name, v) in [("rank_rel", rank_rel), ("eq_abs", eq_abs), ("eq_rel", eq_rel)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "tolerance {name} must be a finite nonnegative number, got {v}"
                )));
            }
        }
        Ok(Self {
            rank_rel,
            eq_abs,
            eq_rel,
        })
    }

    /// Comparison threshold for two operands with the given max-entry norms.
    pub fn eq_threshold(&self, a_norm: f64, b_norm: f64) -> f64 {
        self.eq_abs + self.eq_rel * a_norm.max(b_norm)
    }
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

pub fn conj_transpose(a: &ComplexMatrix) -> ComplexMatrix {
    a.conj_transpose()
}

/// `a^p` by repeated squaring; `a^0 = I`.
pub fn mat_pow(a: &ComplexMatrix, p: usize) -> Result<ComplexMatrix> {
    let n = a.ensure_square("mat_pow")?;
    let mut result = ComplexMatrix::identity(n);
    if p == 0 {
        return Ok(result);
    }
    let mut base = a.clone();
    let mut e = p;
    let mut first = true;
    while e > 0 {
        if e & 1 == 1 {
            result = if first { base.clone() } else { &result * &base };
            first = false;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    Ok(result)
}

/// `‖a − b‖_max ≤ eq_abs + eq_rel · max(‖a‖_max, ‖b‖_max)`.
pub fn approx_eq(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    let diff = a.try_sub(b)?;
    Ok(diff.max_abs() <= tol.eq_threshold(a.max_abs(), b.max_abs()))
}

/// Largest singular value.
pub fn spectral_norm(a: &ComplexMatrix, tol: &Tolerance) -> Result<f64> {
    if a.is_empty() {
        return Ok(0.0);
    }
    Ok(svd(a, tol)?.sigma.first().copied().unwrap_or(0.0))
}

fn cutoff(sigma: &[f64], tol: &Tolerance, scale: f64) -> f64 {
    let smax = sigma.first().copied().unwrap_or(0.0);
    tol.rank_rel * smax.max(scale)
}

/// Number of singular values strictly above `rank_rel · σ_max`.
pub fn rank(a: &ComplexMatrix, tol: &Tolerance) -> Result<usize> {
    rank_with_scale(a, tol, 0.0)
}

/// Like [`rank`], but the cutoff is `rank_rel · max(σ_max, scale)`.
///
/// Powers and blocks of a matrix carry rounding noise proportional to the
/// norm of the matrix they were formed from, not to their own norm; `scale`
/// supplies that reference so a numerically-zero block gets rank 0.
pub fn rank_with_scale(a: &ComplexMatrix, tol: &Tolerance, scale: f64) -> Result<usize> {
    if a.is_empty() {
        return Ok(0);
    }
    let s = svd(a, tol)?;
    let c = cutoff(&s.sigma, tol, scale);
    Ok(s.sigma.iter().filter(|&&x| x > c && x > 0.0).count())
}

/// Moore–Penrose inverse by inverting the singular values above the cutoff.
pub fn pinv(a: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    pinv_with_scale(a, tol, 0.0)
}

/// [`pinv`] with the cutoff reference of [`rank_with_scale`].
pub fn pinv_with_scale(a: &ComplexMatrix, tol: &Tolerance, scale: f64) -> Result<ComplexMatrix> {
    let (m, n) = a.shape();
    if a.is_empty() {
        return Ok(ComplexMatrix::zeros(n, m));
    }
    let s = svd(a, tol)?;
    let c = cutoff(&s.sigma, tol, scale);
    let mut out = ComplexMatrix::zeros(n, m);
    for (idx, &sv) in s.sigma.iter().enumerate() {
        if !(sv > c && sv > 0.0) {
            break;
        }
        let inv = 1.0 / sv;
        // out += v_idx * inv * u_idx^*
        for i in 0..n {
            let vi = s.v[(i, idx)] * inv;
            for j in 0..m {
                out[(i, j)] += vi * s.u[(j, idx)].conj();
            }
        }
    }
    Ok(out)
}

/// Orthogonal projector `a a†` onto the column space of `a`.
pub fn range_projector(a: &ComplexMatrix, tol: &Tolerance, scale: f64) -> Result<ComplexMatrix> {
    let p = pinv_with_scale(a, tol, scale)?;
    a.matmul(&p)
}

/// Orthogonal projector `a† a` onto the row space of `a`.
pub fn corange_projector(a: &ComplexMatrix, tol: &Tolerance, scale: f64) -> Result<ComplexMatrix> {
    let p = pinv_with_scale(a, tol, scale)?;
    p.matmul(a)
}
