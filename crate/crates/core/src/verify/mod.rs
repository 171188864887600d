//! Executable identity checks, matrix-class predicates and a generator of
//! random test matrices.
//!
//! Each check produces a [`CheckReport`]. Identity checks compare matrices
//! under the [`Tolerance`] threshold; equivalence checks compute both sides
//! independently and pass when the two booleans agree.

mod conditions;
mod context;
pub mod generate;
mod suite;

pub use conditions::{check_equality_conditions, check_maximal_block_form, check_maximal_classes, check_special_matrices};
pub use generate::{generate, generate_planted, Instance, InstanceSpec, Plant};
pub use suite::{check_system1, run_suite, run_suite_with, Candidate, Selection};

use crate::decomp::projector_power;
use crate::error::Result;
use crate::numkit::{approx_eq, mat_pow, pinv_with_scale, spectral_norm, ComplexMatrix, Tolerance};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    /// Max-entry norm of the worst violated (or closest to violated)
    /// sub-identity; 0 or 1 for equivalence checks.
    pub residual: f64,
    /// Threshold the residual was compared against.
    pub threshold: f64,
    /// Difference matrix of the worst sub-identity when the check failed.
    pub witness: Option<ComplexMatrix>,
    pub detail: String,
}

impl CheckReport {
    /// Passes when every `(label, lhs, rhs)` pair satisfies `approx_eq`.
    pub fn identity(name: impl Into<String>, tol: &Tolerance, pairs: &[(&str, &ComplexMatrix, &ComplexMatrix)]) -> Self {
        let name = name.into();
        let mut worst: Option<(f64, f64, f64, &str, ComplexMatrix)> = None;
        for (label, lhs, rhs) in pairs {
            let diff = match lhs.try_sub(rhs) {
                Ok(d) => d,
                Err(e) => return Self::error(name, &e),
            };
            let r = diff.max_abs();
            let thr = tol.eq_threshold(lhs.max_abs(), rhs.max_abs());
            let ratio = if thr > 0.0 {
                r / thr
            } else if r == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            if worst.as_ref().is_none_or(|w| ratio > w.0) {
                worst = Some((ratio, r, thr, label, diff));
            }
        }
        let Some((_, residual, threshold, label, diff)) = worst else {
            return Self::vacuous(name, "no sub-identities");
        };
        let passed = residual <= threshold;
        CheckReport {
            name,
            passed,
            residual,
            threshold,
            witness: (!passed).then_some(diff),
            detail: format!("worst: {label}"),
        }
    }

    pub fn boolean(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            passed: ok,
            residual: if ok { 0.0 } else { 1.0 },
            threshold: 0.0,
            witness: None,
            detail: detail.into(),
        }
    }

    /// Equivalence check: passes when both sides agree.
    pub fn iff(name: impl Into<String>, inverse_side: bool, block_side: bool) -> Self {
        Self::boolean(
            name,
            inverse_side == block_side,
            format!("inverse side {inverse_side}, block side {block_side}"),
        )
    }

    pub fn vacuous(name: impl Into<String>, reason: &str) -> Self {
        CheckReport {
            name: name.into(),
            passed: true,
            residual: 0.0,
            threshold: 0.0,
            witness: None,
            detail: format!("not applicable: {reason}"),
        }
    }

    pub fn error(name: impl Into<String>, err: &crate::Error) -> Self {
        CheckReport {
            name: name.into(),
            passed: false,
            residual: f64::INFINITY,
            threshold: 0.0,
            witness: None,
            detail: format!("error: {err}"),
        }
    }
}

/// `P_A ≈ Q_A`.
pub fn is_ep(a: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    a.ensure_square("is_ep")?;
    let p = projector_power(a, 1, tol)?;
    let q = &pinv_with_scale(a, tol, spectral_norm(a, tol)?)? * a;
    approx_eq(&p, &q, tol)
}

/// `A³ ≈ A`.
pub fn is_tripotent(a: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    approx_eq(&mat_pow(a, 3)?, a, tol)
}

/// `A A* A ≈ A`.
pub fn is_partial_isometry(a: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    a.ensure_square("is_partial_isometry")?;
    approx_eq(&(&(a * &a.conj_transpose()) * a), a, tol)
}

/// `A² ≈ A`.
pub fn is_idempotent(a: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    approx_eq(&mat_pow(a, 2)?, a, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::C64;

    #[test]
    fn ep_fixtures() {
        let tol = Tolerance::default();
        let h = ComplexMatrix::from_rows(&[
            vec![C64::new(2.0, 0.0), C64::new(1.0, 1.0)],
            vec![C64::new(1.0, -1.0), C64::new(0.0, 0.0)],
        ])
        .unwrap();
        assert!(is_ep(&h, &tol).unwrap());
        let nil = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert!(!is_ep(&nil, &tol).unwrap());
    }

    #[test]
    fn class_predicates() {
        let tol = Tolerance::default();
        assert!(is_tripotent(&ComplexMatrix::from_real_diagonal(&[1.0, -1.0, 0.0]), &tol).unwrap());
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        let u = generate::random_unitary(&mut rng, 4);
        assert!(is_partial_isometry(&u, &tol).unwrap());
        let p = ComplexMatrix::from_real_rows(&[[0.5, 0.5], [0.5, 0.5]]).unwrap();
        assert!(is_idempotent(&p, &tol).unwrap());
        assert!(!is_idempotent(&ComplexMatrix::from_real_diagonal(&[2.0, 0.0]), &tol).unwrap());
    }

    #[test]
    fn identity_report_picks_worst() {
        let tol = Tolerance::default();
        let a = ComplexMatrix::identity(2);
        let mut b = a.clone();
        b[(0, 1)] = C64::new(0.5, 0.0);
        let r = CheckReport::identity("x", &tol, &[("same", &a, &a), ("off", &a, &b)]);
        assert!(!r.passed);
        assert_eq!(r.residual, 0.5);
        assert!(r.detail.contains("off"));
        assert!(r.witness.is_some());
        let ok = CheckReport::identity("y", &tol, &[("same", &a, &a)]);
        assert!(ok.passed && ok.residual == 0.0 && ok.witness.is_none());
    }

    #[test]
    fn iff_report() {
        assert!(CheckReport::iff("z", true, true).passed);
        assert!(CheckReport::iff("z", false, false).passed);
        let r = CheckReport::iff("z", true, false);
        assert!(!r.passed && r.residual > r.threshold);
    }
}
