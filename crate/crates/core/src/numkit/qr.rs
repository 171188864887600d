use super::matrix::{ComplexMatrix, C64};

/// Householder QR of a square or tall matrix: `a = q · r` with `q` unitary
/// (`m x m`) and `r` upper trapezoidal.
pub fn qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let (m, n) = a.shape();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(m);
    for k in 0..n.min(m.saturating_sub(1)) {
        let Some(v) = householder_vector(&r, k, k) else {
            continue;
        };
        // r <- (I - 2 v v*) r
        for j in 0..n {
            let dot: C64 = (k..m).map(|i| v[i - k].conj() * r[(i, j)]).sum();
            for i in k..m {
                r[(i, j)] -= v[i - k] * dot * 2.0;
            }
        }
        // q <- q (I - 2 v v*)
        for i in 0..m {
            let dot: C64 = (k..m).map(|l| q[(i, l)] * v[l - k]).sum();
            for l in k..m {
                q[(i, l)] -= dot * v[l - k].conj() * 2.0;
            }
        }
        for i in k + 1..m {
            r[(i, k)] = C64::new(0.0, 0.0);
        }
    }
    (q, r)
}

/// Unit vector `v` such that `(I - 2 v v*)` maps `x = a[row.., col]` onto a
/// multiple of the first basis vector. `None` when `x` is already there.
pub(crate) fn householder_vector(a: &ComplexMatrix, row: usize, col: usize) -> Option<Vec<C64>> {
    let m = a.rows();
    let x: Vec<C64> = (row..m).map(|i| a[(i, col)]).collect();
    let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
    if tail == 0.0 {
        return None;
    }
    let norm = (x[0].norm_sqr() + tail).sqrt();
    let phase = if x[0].norm() > 0.0 {
        x[0] / x[0].norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let mut v = x;
    v[0] += phase * norm;
    let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Some(v.into_iter().map(|z| z / vn).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reconstructs_and_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let a = ComplexMatrix::from_fn(5, 5, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let (q, r) = qr(&a);
        assert!((&(&q * &r) - &a).max_abs() < 1e-13);
        assert!((&(&q.conj_transpose() * &q) - &ComplexMatrix::identity(5)).max_abs() < 1e-13);
        for i in 0..5 {
            for j in 0..i {
                assert_eq!(r[(i, j)], C64::new(0.0, 0.0));
            }
        }
    }
}
