use ginv_core::decomp::{matrix_index, projector_power};
use ginv_core::inverses::{self, InverseKind, Route};
use ginv_core::numkit::{approx_eq, mat_pow, pinv_with_scale, spectral_norm};
use ginv_core::verify::{generate, InstanceSpec};
use ginv_core::{ComplexMatrix, Error, Tolerance, C64};

fn tol() -> Tolerance {
    Tolerance::default()
}

fn example() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 0.0, 0.0, 0.0],
    ])
    .unwrap()
}

fn e(n: usize, entries: &[(usize, usize)]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for &(i, j) in entries {
        m[(i, j)] = C64::new(1.0, 0.0);
    }
    m
}

fn nonsingular() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![C64::new(2.0, 1.0), C64::new(0.5, 0.0), C64::new(0.0, -1.0)],
        vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 1.0)],
        vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0), C64::new(3.0, 0.0)],
    ])
    .unwrap()
}

fn nilpotent() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 2.0, 1.0], [0.0, 0.0, -3.0], [0.0, 0.0, 0.0]]).unwrap()
}

fn close(a: &ComplexMatrix, b: &ComplexMatrix, bound: f64) {
    let d = (a - b).max_abs();
    assert!(d <= bound, "difference {d:e} exceeds {bound:e}\n{a:?}\n{b:?}");
}

fn all_kinds(m: usize) -> Vec<InverseKind> {
    vec![
        InverseKind::MoorePenrose,
        InverseKind::Group,
        InverseKind::Drazin,
        InverseKind::Core,
        InverseKind::CoreEp,
        InverseKind::Dmp,
        InverseKind::Wg,
        InverseKind::MWeakGroup(m),
        InverseKind::Wc,
        InverseKind::MWeakCore(m),
    ]
}

#[test]
fn example_matrix_values() {
    let a = example();
    let t = tol();
    assert_eq!(matrix_index(&a, &t).unwrap(), 4);
    let row1 = e(5, &[(0, 0), (0, 3)]);
    close(&inverses::wg_inverse(&a, &t).unwrap(), &row1, 1e-10);
    close(&inverses::m_weak_group(&a, 1, &t).unwrap(), &row1, 1e-10);
    close(&inverses::wc_inverse(&a, &t).unwrap(), &row1, 1e-10);
    for route in [Route::Definitional, Route::CoreEpCanonical, Route::HartwigSpindelbock] {
        close(&inverses::m_weak_core(&a, 1, &t, route).unwrap(), &row1, 1e-10);
    }
    close(&inverses::compute(&a, InverseKind::MWeakCore(1), &t).unwrap(), &row1, 1e-10);
    close(&inverses::core_ep_inverse(&a, &t).unwrap(), &e(5, &[(0, 0)]), 1e-10);
}

#[test]
fn identity_is_fixed_by_every_kind() {
    let i3 = ComplexMatrix::identity(3);
    for kind in all_kinds(2) {
        close(&inverses::compute(&i3, kind, &tol()).unwrap(), &i3, 1e-12);
    }
}

#[test]
fn nonsingular_gives_inverse() {
    let a = nonsingular();
    let inv = inverses::compute(&a, InverseKind::MoorePenrose, &tol()).unwrap();
    close(&(&a * &inv), &ComplexMatrix::identity(3), 1e-12);
    for kind in all_kinds(3) {
        close(&inverses::compute(&a, kind, &tol()).unwrap(), &inv, 1e-10);
    }
}

#[test]
fn nilpotent_gives_zero() {
    let a = nilpotent();
    let zero = ComplexMatrix::zeros(3, 3);
    for kind in [
        InverseKind::Drazin,
        InverseKind::CoreEp,
        InverseKind::Dmp,
        InverseKind::Wg,
        InverseKind::Wc,
        InverseKind::MWeakGroup(1),
        InverseKind::MWeakCore(2),
    ] {
        close(&inverses::compute(&a, kind, &tol()).unwrap(), &zero, 1e-12);
    }
}

#[test]
fn group_and_core_preconditions() {
    let a = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
    let err = inverses::group_inverse(&a, &tol()).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)));
    assert!(err.to_string().contains("group inverse requires index ≤ 1"));
    let err = inverses::core_inverse(&a, &tol()).unwrap_err();
    assert!(err.to_string().contains("core inverse exists iff Ind(A) ≤ 1"));
    for route in [Route::Definitional, Route::CoreEpCanonical] {
        let err = inverses::compute_by(&a, InverseKind::Core, route, &tol()).unwrap_err();
        assert!(err.is_precondition());
    }
}

#[test]
fn kind_parsing_and_validation() {
    assert_eq!(InverseKind::parse("mwc", Some(2)).unwrap(), InverseKind::MWeakCore(2));
    assert_eq!(InverseKind::parse("core-ep", None).unwrap(), InverseKind::CoreEp);
    assert!(InverseKind::parse("mwg", None).is_err());
    assert!(InverseKind::parse("bt", None).is_err());
    assert!(InverseKind::MWeakCore(0).validate().is_err());
    assert!(inverses::compute(&ComplexMatrix::identity(2), InverseKind::MWeakGroup(0), &tol()).is_err());
    assert!(!InverseKind::Drazin.supports(Route::HartwigSpindelbock));
    assert!(inverses::compute_by(&example(), InverseKind::Drazin, Route::HartwigSpindelbock, &tol()).is_err());
    assert_eq!(Route::parse("hs").unwrap(), Route::HartwigSpindelbock);
}

#[test]
fn hs_route_rejects_zero_matrix() {
    let z = ComplexMatrix::zeros(3, 3);
    let err = inverses::m_weak_core(&z, 1, &tol(), Route::HartwigSpindelbock).unwrap_err();
    assert!(err.is_precondition());
    close(&inverses::m_weak_core(&z, 1, &tol(), Route::CoreEpCanonical).unwrap(), &z, 0.0);
}

#[test]
fn drazin_matches_cline_oracle() {
    let t = tol();
    let a = generate(&InstanceSpec::new(6, 2, 2, 77)).unwrap();
    let k = 2;
    let s = spectral_norm(&a, &t).unwrap();
    let ak = mat_pow(&a, k).unwrap();
    let oracle = &(&ak * &pinv_with_scale(&mat_pow(&a, 2 * k + 1).unwrap(), &t, s.powi(5)).unwrap()) * &ak;
    let d = inverses::drazin(&a, &t).unwrap();
    close(&d, &oracle, 1e-8);
    close(&(&(&d * &a) * &d), &d, 1e-9);
    close(&(&a * &d), &(&d * &a), 1e-9);
    close(&(&d * &mat_pow(&a, 3).unwrap()), &ak, 1e-9);
}

#[test]
fn group_and_core_on_index_one() {
    let t = tol();
    let a = generate(&InstanceSpec::new(4, 2, 1, 5)).unwrap();
    let g = inverses::group_inverse(&a, &t).unwrap();
    close(&(&(&a * &g) * &a), &a, 1e-9);
    let c = inverses::core_inverse(&a, &t).unwrap();
    let p_a = projector_power(&a, 1, &t).unwrap();
    close(&(&a * &c), &p_a, 1e-9);
    close(&(&p_a * &c), &c, 1e-9);
    for m in 1..=3 {
        close(&inverses::m_weak_core(&a, m, &t, Route::CoreEpCanonical).unwrap(), &c, 1e-9);
    }
}

#[test]
fn core_inverse_of_projector() {
    let p = ComplexMatrix::from_real_rows(&[[0.5, 0.5], [0.5, 0.5]]).unwrap();
    close(&inverses::core_inverse(&p, &tol()).unwrap(), &p, 1e-12);
}

#[test]
fn dmp_defining_relation() {
    let t = tol();
    let a = generate(&InstanceSpec::new(6, 2, 3, 31)).unwrap();
    let x = inverses::dmp_inverse(&a, &t).unwrap();
    let d = inverses::drazin(&a, &t).unwrap();
    close(&(&x * &a), &(&d * &a), 1e-9);
    let by_def = inverses::compute_by(&a, InverseKind::Dmp, Route::Definitional, &t).unwrap();
    close(&x, &by_def, 1e-9);
}

#[test]
fn wg_and_mwg_defining_systems() {
    let t = tol();
    let a = generate(&InstanceSpec::new(7, 3, 3, 13)).unwrap();
    let ce = inverses::core_ep_inverse(&a, &t).unwrap();
    let wg = inverses::wg_inverse(&a, &t).unwrap();
    close(&(&a * &(&wg * &wg)), &wg, 1e-9);
    close(&(&a * &wg), &(&ce * &a), 1e-9);
    close(&inverses::m_weak_group(&a, 1, &t).unwrap(), &wg, 1e-9);
    for m in 1..=5 {
        let x = inverses::m_weak_group(&a, m, &t).unwrap();
        let by_def = inverses::compute_by(&a, InverseKind::MWeakGroup(m), Route::Definitional, &t).unwrap();
        close(&x, &by_def, 1e-9);
        close(&(&a * &(&x * &x)), &x, 1e-9);
        let rhs = &mat_pow(&ce, m).unwrap() * &mat_pow(&a, m).unwrap();
        close(&(&a * &x), &rhs, 1e-9);
    }
    let d = inverses::drazin(&a, &t).unwrap();
    for m in 3..=5 {
        close(&inverses::m_weak_group(&a, m, &t).unwrap(), &d, 1e-9);
    }
}

#[test]
fn mwc_routes_and_coincidences() {
    let t = tol();
    let a = generate(&InstanceSpec::new(7, 2, 3, 2024)).unwrap();
    let ce = inverses::core_ep_inverse(&a, &t).unwrap();
    for m in 1..=5 {
        let xs: Vec<_> = [Route::Definitional, Route::CoreEpCanonical, Route::HartwigSpindelbock]
            .into_iter()
            .map(|r| inverses::m_weak_core(&a, m, &t, r).unwrap())
            .collect();
        close(&xs[0], &xs[1], 1e-9);
        close(&xs[1], &xs[2], 1e-9);
        if m >= 3 {
            close(&xs[1], &ce, 1e-9);
        }
    }
    let wc = inverses::wc_inverse(&a, &t).unwrap();
    close(&inverses::m_weak_core(&a, 1, &t, Route::CoreEpCanonical).unwrap(), &wc, 1e-9);
    for route in [Route::Definitional, Route::HartwigSpindelbock] {
        close(&inverses::compute_by(&a, InverseKind::Wc, route, &t).unwrap(), &wc, 1e-9);
        close(&inverses::compute_by(&a, InverseKind::CoreEp, route, &t).unwrap(), &ce, 1e-9);
    }
}

#[test]
fn ill_conditioned_t_warns() {
    let a = ComplexMatrix::from_real_diagonal(&[1.0, 1e-9]);
    let out = inverses::compute_with_diagnostics(&a, InverseKind::Drazin, Route::CoreEpCanonical, &tol()).unwrap();
    assert!(!out.warnings.is_empty());
    let ok = inverses::compute_with_diagnostics(&example(), InverseKind::Drazin, Route::CoreEpCanonical, &tol()).unwrap();
    assert!(ok.warnings.is_empty());
}

#[test]
fn mp_routes_agree() {
    let t = tol();
    let a = generate(&InstanceSpec::new(6, 3, 2, 99)).unwrap();
    let x = inverses::moore_penrose(&a, &t).unwrap();
    let y = inverses::compute_by(&a, InverseKind::MoorePenrose, Route::Definitional, &t).unwrap();
    assert!(approx_eq(&x, &y, &t).unwrap());
}
