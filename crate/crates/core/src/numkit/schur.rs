//! Complex Schur form with eigenvalue reordering.
//!
//! Householder reduction to upper Hessenberg form, single-shift QR sweeps
//! with Wilkinson shifts, then adjacent swaps of diagonal entries by Givens
//! rotations to move a selected set of eigenvalues to the leading block.

use super::matrix::{ComplexMatrix, C64};
use super::qr::householder_vector;
use super::Tolerance;
use crate::error::{Error, Result};

/// `a = u · r · u*` with `r` upper triangular and the first `split`
/// diagonal entries of `r` being the selected (nonzero) eigenvalues.
#[derive(Debug, Clone)]
pub struct OrderedSchur {
    pub u: ComplexMatrix,
    pub r: ComplexMatrix,
    pub split: usize,
}

impl OrderedSchur {
    pub fn reconstruct(&self) -> ComplexMatrix {
        &(&self.u * &self.r) * &self.u.conj_transpose()
    }
}

/// Schur form ordered so that every diagonal entry with modulus above
/// `rank_rel · ‖a‖_F` precedes every entry at or below it.
///
/// The Frobenius norm of the input is the spectral scale: it bounds every
/// eigenvalue modulus and does not collapse for nilpotent inputs.
pub fn ordered_schur(a: &ComplexMatrix, tol: &Tolerance) -> Result<OrderedSchur> {
    a.ensure_square("ordered_schur")?;
    let (u, r) = schur(a)?;
    let cutoff = tol.rank_rel * a.frobenius();
    let select: Vec<bool> = r.diagonal().iter().map(|z| z.norm() > cutoff).collect();
    Ok(reorder(u, r, select))
}

/// Schur form whose leading `count` diagonal entries are the `count`
/// eigenvalues of largest modulus (ties broken by position).
pub fn ordered_schur_leading(a: &ComplexMatrix, count: usize) -> Result<OrderedSchur> {
    let n = a.ensure_square("ordered_schur_leading")?;
    if count > n {
        return Err(Error::InvalidArgument(format!(
            "cannot select {count} eigenvalues of a {n}x{n} matrix"
        )));
    }
    let (u, r) = schur(a)?;
    let moduli: Vec<f64> = r.diagonal().iter().map(|z| z.norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| moduli[j].total_cmp(&moduli[i]).then(i.cmp(&j)));
    let mut select = vec![false; n];
    for &i in &order[..count] {
        select[i] = true;
    }
    Ok(reorder(u, r, select))
}

fn reorder(mut u: ComplexMatrix, mut r: ComplexMatrix, mut select: Vec<bool>) -> OrderedSchur {
    let n = r.rows();
    let mut front = 0;
    for i in 0..n {
        if !select[i] {
            continue;
        }
        for j in (front..i).rev() {
            swap_adjacent(&mut u, &mut r, j);
            select.swap(j, j + 1);
        }
        front += 1;
    }
    OrderedSchur { u, r, split: front }
}

/// Exchanges the diagonal entries at `i` and `i + 1` by a unitary similarity.
fn swap_adjacent(u: &mut ComplexMatrix, r: &mut ComplexMatrix, i: usize) {
    let n = r.rows();
    let a = r[(i, i)];
    let b = r[(i + 1, i + 1)];
    let c = r[(i, i + 1)];
    // (c, b - a) is an eigenvector of [[a, c], [0, b]] for eigenvalue b.
    let x1 = c;
    let x2 = b - a;
    let nrm = (x1.norm_sqr() + x2.norm_sqr()).sqrt();
    if nrm == 0.0 {
        return;
    }
    let (g1, g2) = (x1 / nrm, x2 / nrm);
    // G = [[g1, -conj(g2)], [g2, conj(g1)]]; apply r <- G* r G, u <- u G.
    for j in i..n {
        let p = r[(i, j)];
        let q = r[(i + 1, j)];
        r[(i, j)] = g1.conj() * p + g2.conj() * q;
        r[(i + 1, j)] = -g2 * p + g1 * q;
    }
    for k in 0..=i + 1 {
        let p = r[(k, i)];
        let q = r[(k, i + 1)];
        r[(k, i)] = g1 * p + g2 * q;
        r[(k, i + 1)] = -g2.conj() * p + g1.conj() * q;
    }
    for k in 0..n {
        let p = u[(k, i)];
        let q = u[(k, i + 1)];
        u[(k, i)] = g1 * p + g2 * q;
        u[(k, i + 1)] = -g2.conj() * p + g1.conj() * q;
    }
    r[(i + 1, i)] = C64::new(0.0, 0.0);
    r[(i, i)] = b;
    r[(i + 1, i + 1)] = a;
}

/// Unordered complex Schur form `a = u r u*`.
fn schur(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = a.rows();
    let (mut h, mut z) = hessenberg(a);
    if n < 2 {
        return Ok((z, h));
    }
    let scale = h.frobenius();
    let eps = f64::EPSILON;
    let max_iter = 60 * n;
    let mut hi = n - 1;
    let mut since_deflation = 0;
    let mut total = 0;

    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if s == 0.0 {
                s = scale;
            }
            if h[(l, l - 1)].norm() <= eps * s {
                h[(l, l - 1)] = C64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > max_iter {
            return Err(Error::NoConvergence {
                algorithm: "complex Schur QR",
                iterations: total,
            });
        }
        let shift = if since_deflation % 11 == 0 {
            // Exceptional shift breaks cycles.
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep(&mut h, &mut z, l, hi, shift);
    }

    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    Ok((z, h))
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicitly shifted QR step on the active window `lo..=hi`, applied as
/// a similarity to the full matrix.
fn qr_sweep(h: &mut ComplexMatrix, z: &mut ComplexMatrix, lo: usize, hi: usize, shift: C64) {
    let n = h.rows();
    for i in lo..=hi {
        h[(i, i)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for i in lo..hi {
        let x = h[(i, i)];
        let y = h[(i + 1, i)];
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
        } else {
            (x / r, y / r)
        };
        for j in i..n {
            let p = h[(i, j)];
            let q = h[(i + 1, j)];
            h[(i, j)] = c.conj() * p + s.conj() * q;
            h[(i + 1, j)] = -s * p + c * q;
        }
        h[(i + 1, i)] = C64::new(0.0, 0.0);
        rotations.push((c, s));
    }
    for (offset, &(c, s)) in rotations.iter().enumerate() {
        let i = lo + offset;
        for k in 0..=(i + 1) {
            let p = h[(k, i)];
            let q = h[(k, i + 1)];
            h[(k, i)] = c * p + s * q;
            h[(k, i + 1)] = -s.conj() * p + c.conj() * q;
        }
        for k in 0..n {
            let p = z[(k, i)];
            let q = z[(k, i + 1)];
            z[(k, i)] = c * p + s * q;
            z[(k, i + 1)] = -s.conj() * p + c.conj() * q;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += shift;
    }
}

/// Householder reduction `a = z h z*` with `h` upper Hessenberg.
fn hessenberg(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut z = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let Some(v) = householder_vector(&h, k + 1, k) else {
            continue;
        };
        let off = k + 1;
        // h <- P h
        for j in 0..n {
            let dot: C64 = (off..n).map(|i| v[i - off].conj() * h[(i, j)]).sum();
            for i in off..n {
                h[(i, j)] -= v[i - off] * dot * 2.0;
            }
        }
        // h <- h P, z <- z P
        for i in 0..n {
            let dot: C64 = (off..n).map(|l| h[(i, l)] * v[l - off]).sum();
            for l in off..n {
                h[(i, l)] -= dot * v[l - off].conj() * 2.0;
            }
            let dot: C64 = (off..n).map(|l| z[(i, l)] * v[l - off]).sum();
            for l in off..n {
                z[(i, l)] -= dot * v[l - off].conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
    (h, z)
}
