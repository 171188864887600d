use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::context::Context;
use super::generate::gaussian;
use super::{is_ep, is_idempotent, is_partial_isometry, is_tripotent, CheckReport};
use crate::error::Result;
use crate::numkit::{approx_eq, ComplexMatrix, Tolerance};

/// Equalities of `A^{⊕_m}` with other inverses, each paired with its
/// block condition on the core-EP decomposition.
pub fn check_equality_conditions(a: &ComplexMatrix, m: usize, tol: &Tolerance) -> Vec<CheckReport> {
    with_context(a, m, tol, "equal", |ctx, x| equality_reports(ctx, m, x))
}

/// Equalities of `A^{⊕_m}` with `0`, `A`, `A*` and `P_A`.
pub fn check_special_matrices(a: &ComplexMatrix, m: usize, tol: &Tolerance) -> Vec<CheckReport> {
    with_context(a, m, tol, "special", |ctx, x| special_reports(ctx, m, x))
}

/// Builds `G = A^{Ⓦ_m} + Z(I - P_{A^m})` and `H = (A^m)† + (I - Q_{A^m})W`
/// and checks `G A^m H = A^{⊕_m}` together with the derived identities.
pub fn check_maximal_classes(
    a: &ComplexMatrix,
    m: usize,
    z: &ComplexMatrix,
    w: &ComplexMatrix,
    tol: &Tolerance,
) -> CheckReport {
    let name = format!("maximal.param_c[m={m}]");
    if let Err(e) = check_shape(a, z).and_then(|_| check_shape(a, w)) {
        return CheckReport::error(name, &e);
    }
    with_context(a, m, tol, "maximal.param_c", |ctx, x| vec![maximal_c(ctx, m, x, z, w)]).remove(0)
}

/// Same as [`check_maximal_classes`] with `G` and `H` drawn from the block
/// parametrization over the core-EP decomposition, free blocks seeded.
pub fn check_maximal_block_form(a: &ComplexMatrix, m: usize, seed: u64, tol: &Tolerance) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    with_context(a, m, tol, "maximal.block_d", |ctx, x| vec![maximal_d(ctx, m, x, &mut rng)]).remove(0)
}

fn check_shape(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(crate::Error::DimensionMismatch {
            op: "check_maximal_classes",
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(())
}

fn with_context(
    a: &ComplexMatrix,
    m: usize,
    tol: &Tolerance,
    prefix: &str,
    f: impl FnOnce(&Context, &ComplexMatrix) -> Vec<CheckReport>,
) -> Vec<CheckReport> {
    let name = format!("{prefix}.setup[m={m}]");
    if m == 0 {
        return vec![CheckReport::error(name, &crate::Error::InvalidArgument("m must be at least 1".into()))];
    }
    if let Err(e) = a.ensure_square("verify") {
        return vec![CheckReport::error(name, &e)];
    }
    let ctx = match Context::new(a, tol) {
        Ok(c) => c,
        Err(e) => return vec![CheckReport::error(name, &e)],
    };
    match ctx.canon.m_weak_core(m) {
        Ok(x) => f(&ctx, &x),
        Err(e) => vec![CheckReport::error(name, &e)],
    }
}

fn iff_report(name: String, inverse: Result<bool>, block: Result<bool>) -> CheckReport {
    match (inverse, block) {
        (Ok(i), Ok(b)) => CheckReport::iff(name, i, b),
        (Err(e), _) | (_, Err(e)) => CheckReport::error(name, &e),
    }
}

fn is_zero(x: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    approx_eq(x, &ComplexMatrix::zeros(x.rows(), x.cols()), tol)
}

pub(crate) fn equality_reports(ctx: &Context, m: usize, x: &ComplexMatrix) -> Vec<CheckReport> {
    let tol = &ctx.tol;
    let d = &ctx.canon.decomposition;
    let k = ctx.k;
    let nm = |s: &str| format!("equal.{s}[m={m}]");
    let s = &d.s_block;
    let size = d.n() - d.t_size;
    let eye = ComplexMatrix::identity(size);

    let blocks = (|| -> Result<_> {
        let tt_m = d.t_tilde_raw(m)?;
        let tt_k = d.t_tilde_raw(k)?;
        let p_nm = d.n_range_projector(m, tol)?;
        let p_n = d.n_range_projector(1, tol)?;
        let t_shift = d.t_power(m as i64 - k as i64, tol)?;
        let t_m1 = d.t_power(m as i64 - 1, tol)?;
        let n_m = d.n_power(m)?;
        Ok((tt_m, tt_k, p_nm, p_n, t_shift, t_m1, n_m))
    })();
    let (tt_m, tt_k, p_nm, p_n, t_shift, t_m1, n_m) = match blocks {
        Ok(b) => b,
        Err(e) => return vec![CheckReport::error(nm("blocks"), &e)],
    };
    let lhs = &tt_m * &p_nm;

    let mut out = Vec::new();
    out.push(iff_report(
        nm("mp"),
        approx_eq(x, &ctx.pinv, tol),
        is_zero(s, tol).and_then(|a| Ok(a && is_zero(&d.n_block, tol)?)),
    ));
    out.push(iff_report(nm("drazin"), approx_eq(x, &ctx.drazin, tol), approx_eq(&lhs, &(&t_shift * &tt_k), tol)));
    out.push(iff_report(nm("core_ep"), approx_eq(x, &ctx.core_ep, tol), is_zero(&(&tt_m * &n_m), tol)));
    out.push(iff_report(
        nm("dmp"),
        ctx.def.dmp().and_then(|y| approx_eq(x, &y, tol)),
        approx_eq(&lhs, &(&(&t_shift * &tt_k) * &p_n), tol),
    ));
    out.push(iff_report(
        nm("wc"),
        ctx.def.wc().and_then(|y| approx_eq(x, &y, tol)),
        approx_eq(&lhs, &(&(&t_m1 * s) * &p_n), tol),
    ));
    out.push(iff_report(
        nm("mwg"),
        approx_eq(x, &ctx.mwg(m), tol),
        is_zero(&(&tt_m * &(&eye - &p_nm)), tol),
    ));
    out
}

pub(crate) fn special_reports(ctx: &Context, m: usize, x: &ComplexMatrix) -> Vec<CheckReport> {
    let a = ctx.a;
    let tol = &ctx.tol;
    let nm = |s: &str| format!("special.{s}[m={m}]");
    let ep = is_ep(a, tol);
    let both = |other: Result<bool>| -> Result<bool> { Ok(*ep.as_ref().map_err(Clone::clone)? && other?) };
    vec![
        iff_report(nm("zero"), is_zero(x, tol), is_zero(&ctx.pow(ctx.k), tol)),
        iff_report(nm("self"), approx_eq(x, a, tol), both(is_tripotent(a, tol))),
        iff_report(
            nm("adjoint"),
            approx_eq(x, &a.conj_transpose(), tol),
            both(is_partial_isometry(a, tol)),
        ),
        iff_report(
            nm("projector"),
            ctx.p(1).and_then(|p| approx_eq(x, &p, tol)),
            is_idempotent(a, tol),
        ),
    ]
}

pub(crate) fn maximal_c(ctx: &Context, m: usize, x: &ComplexMatrix, z: &ComplexMatrix, w: &ComplexMatrix) -> CheckReport {
    let name = format!("maximal.param_c[m={m}]");
    let run = || -> Result<CheckReport> {
        let n = ctx.n();
        let eye = ComplexMatrix::identity(n);
        let am = ctx.pow(m);
        let pam = ctx.p(m)?;
        let qam = ctx.q(m)?;
        let wgm = ctx.mwg(m);
        let g = &wgm + &(z * &(&eye - &pam));
        let h = &ctx.def.pinv_power(m)? + &(&(&eye - &qam) * w);
        let gam = &g * &am;
        let wgm_am_h = &(&wgm * &am) * &h;
        Ok(CheckReport::identity(
            name.clone(),
            &ctx.tol,
            &[
                ("A^m H A^m = A^m", &(&(&am * &h) * &am), &am),
                ("G A^m H = X", &(&gam * &h), x),
                ("G A^m = A^{Ⓦ_m} A^m", &gam, &(&wgm * &am)),
                ("A^{Ⓦ_m} A^m H = A^{Ⓦ_m} P_{A^m}", &wgm_am_h, &(&wgm * &pam)),
                ("A^{Ⓦ_m} A^m H (I - P_{A^m}) = 0", &(&wgm_am_h * &(&eye - &pam)), &ComplexMatrix::zeros(n, n)),
                ("P_{A^k} G A^m = G A^m", &(&ctx.p_ak * &gam), &gam),
                ("A^m G A^m = A^⊕ A^{2m}", &(&am * &gam), &(&ctx.core_ep * &ctx.pow(2 * m))),
            ],
        ))
    };
    run().unwrap_or_else(|e| CheckReport::error(name, &e))
}

pub(crate) fn maximal_d(ctx: &Context, m: usize, x: &ComplexMatrix, rng: &mut ChaCha8Rng) -> CheckReport {
    let name = format!("maximal.block_d[m={m}]");
    let mut run = || -> Result<CheckReport> {
        let d = &ctx.canon.decomposition;
        let tol = &ctx.tol;
        let t = d.t_size;
        let r = d.n() - t;
        let eye_r = ComplexMatrix::identity(r);
        let t_inv = ctx.canon.t_inverse();
        let t_inv_m = ctx.canon.t_inv_power(m);
        let tt_m = d.t_tilde_raw(m)?;
        let p_nm = d.n_range_projector(m, tol)?;
        let comp = &eye_r - &p_nm;
        let lifted = &(&ctx.canon.t_inv_power(m + 1) * &tt_m) * &p_nm;

        let z12 = gaussian(rng, t, r);
        let z22 = gaussian(rng, r, r);
        let h21 = gaussian(rng, r, t);
        let h22 = gaussian(rng, r, r);

        let g12 = &lifted + &(&z12 * &comp);
        let g = d.from_block_form(&ComplexMatrix::from_blocks(t_inv, &g12, &ComplexMatrix::zeros(r, t), &(&z22 * &comp))?);

        let mm = &tt_m + &(&(&t_inv_m * &tt_m) * &d.n_power(m)?);
        let h11 = &t_inv_m * &(&ComplexMatrix::identity(t) - &(&mm * &h21));
        let h12 = &t_inv_m * &(&(&(&t_inv_m * &tt_m) * &p_nm) - &(&mm * &h22));
        let h = d.from_block_form(&ComplexMatrix::from_blocks(&h11, &h12, &h21, &h22)?);

        let am = ctx.pow(m);
        Ok(CheckReport::identity(
            name.clone(),
            tol,
            &[("G A^m H = X", &(&(&g * &am) * &h), x)],
        ))
    };
    run().unwrap_or_else(|e| CheckReport::error(name, &e))
}
