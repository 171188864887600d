use super::matrix::{ComplexMatrix, C64};
use super::Tolerance;
use crate::error::{Error, Result};

/// Inverse by LU factorization with partial pivoting.
///
/// A pivot with modulus at or below `rank_rel · ‖t‖_max` is treated as zero
/// and reported in the error.
pub fn inverse_of_nonsingular(t: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let n = t.ensure_square("inverse_of_nonsingular")?;
    let mut lu = t.clone();
    let mut inv = ComplexMatrix::identity(n);
    let floor = tol.rank_rel * t.max_abs();

    for col in 0..n {
        let (piv, piv_abs) = (col..n)
            .map(|r| (r, lu[(r, col)].norm()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if piv_abs <= floor || piv_abs == 0.0 {
            return Err(Error::Singular { pivot: piv_abs });
        }
        if piv != col {
            for j in 0..n {
                let tmp = lu[(col, j)];
                lu[(col, j)] = lu[(piv, j)];
                lu[(piv, j)] = tmp;
                let tmp = inv[(col, j)];
                inv[(col, j)] = inv[(piv, j)];
                inv[(piv, j)] = tmp;
            }
        }
        let p = lu[(col, col)];
        for r in col + 1..n {
            let f = lu[(r, col)] / p;
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for j in col..n {
                let v = lu[(col, j)];
                lu[(r, j)] -= f * v;
            }
            for j in 0..n {
                let v = inv[(col, j)];
                inv[(r, j)] -= f * v;
            }
        }
    }
    solve_upper_triangular(&lu, &inv, tol)
}

/// Solves `r · x = b` for upper-triangular `r` by back substitution.
pub fn solve_upper_triangular(
    r: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<ComplexMatrix> {
    let n = r.ensure_square("solve_upper_triangular")?;
    if b.rows() != n {
        return Err(Error::DimensionMismatch {
            op: "solve_upper_triangular",
            left: r.shape(),
            right: b.shape(),
        });
    }
    let floor = tol.rank_rel * r.max_abs();
    if let Some(i) = (0..n).find(|&i| r[(i, i)].norm() <= floor || r[(i, i)].norm() == 0.0) {
        return Err(Error::Singular {
            pivot: r[(i, i)].norm(),
        });
    }
    let mut x = b.clone();
    for c in 0..b.cols() {
        for i in (0..n).rev() {
            let mut acc = x[(i, c)];
            for k in i + 1..n {
                acc -= r[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = acc / r[(i, i)];
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_scalar() {
        let tol = Tolerance::default();
        assert_eq!(
            inverse_of_nonsingular(&ComplexMatrix::identity(3), &tol).unwrap(),
            ComplexMatrix::identity(3)
        );
        let two = ComplexMatrix::from_real_rows(&[[2.0]]).unwrap();
        assert_eq!(inverse_of_nonsingular(&two, &tol).unwrap()[(0, 0)], C64::new(0.5, 0.0));
    }

    #[test]
    fn random_well_conditioned_residual() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let t = ComplexMatrix::from_fn(4, 4, |i, j| {
            let d = if i == j { 4.0 } else { 0.0 };
            C64::new(d + rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let x = inverse_of_nonsingular(&t, &tol).unwrap();
        assert!((&(&t * &x) - &ComplexMatrix::identity(4)).max_abs() <= 1e-11);
    }

    #[test]
    fn singular_reports_pivot() {
        let tol = Tolerance::default();
        let s = ComplexMatrix::from_real_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        match inverse_of_nonsingular(&s, &tol) {
            Err(Error::Singular { pivot }) => assert!(pivot < 1e-12),
            other => panic!("expected singular error, got {other:?}"),
        }
    }

    #[test]
    fn upper_triangular_solve() {
        let tol = Tolerance::default();
        let r = ComplexMatrix::from_real_rows(&[[2.0, 1.0], [0.0, 4.0]]).unwrap();
        let x = solve_upper_triangular(&r, &ComplexMatrix::identity(2), &tol).unwrap();
        assert!((&(&r * &x) - &ComplexMatrix::identity(2)).max_abs() < 1e-15);
        let sing = ComplexMatrix::from_real_rows(&[[2.0, 1.0], [0.0, 0.0]]).unwrap();
        assert!(solve_upper_triangular(&sing, &ComplexMatrix::identity(2), &tol).is_err());
    }
}
