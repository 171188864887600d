use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::context::Context;
use super::{conditions, CheckReport};
use crate::decomp::pinv_power_blockwise;
use crate::error::Result;
use crate::inverses::hs;
use crate::numkit::{approx_eq, pinv_with_scale, rank, rank_with_scale, ComplexMatrix, Tolerance, C64};

/// The matrix the suite treats as `A^{⊕_m}`. Anything other than
/// `MWeakCore` is a deliberate fault used to confirm that checks can fail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Candidate {
    MWeakCore,
    /// The DMP inverse `A^d A A†`.
    Dmp,
    /// `A^{⊕_m}` plus the given multiple of the all-ones matrix.
    Perturbed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    All,
    /// Identities, characterizations and coincidences.
    Props,
    /// Equivalences with other inverses.
    Equalities,
    /// Equivalences with matrix classes.
    Special,
    /// General `G A^m H` representations.
    Maximal,
}

impl Selection {
    fn has(&self, part: Selection) -> bool {
        *self == Selection::All || *self == part
    }
}

pub fn run_suite(a: &ComplexMatrix, m_values: &[usize], tol: &Tolerance) -> Vec<CheckReport> {
    run_suite_with(a, m_values, tol, Selection::All, Candidate::MWeakCore)
}

/// Runs the selected checks for each `m` in order. Setup failures are
/// reported as failing checks rather than returned as errors.
pub fn run_suite_with(
    a: &ComplexMatrix,
    m_values: &[usize],
    tol: &Tolerance,
    selection: Selection,
    candidate: Candidate,
) -> Vec<CheckReport> {
    if let Err(e) = a.ensure_square("run_suite") {
        return vec![CheckReport::error("suite.input", &e)];
    }
    if m_values.contains(&0) {
        let e = crate::Error::InvalidArgument("m must be at least 1".into());
        return vec![CheckReport::error("suite.input", &e)];
    }
    let ctx = match Context::new(a, tol) {
        Ok(c) => c,
        Err(e) => return vec![CheckReport::error("suite.setup", &e)],
    };

    let mut out = Vec::new();
    if selection.has(Selection::Props) {
        out.extend(route_checks(&ctx));
    }
    for &m in m_values {
        let x = match candidate_matrix(&ctx, m, candidate) {
            Ok(x) => x,
            Err(e) => {
                out.push(CheckReport::error(format!("suite.candidate[m={m}]"), &e));
                continue;
            }
        };
        if selection.has(Selection::Props) {
            out.extend(property_checks(&ctx, m, &x));
        }
        if selection.has(Selection::Equalities) {
            out.extend(conditions::equality_reports(&ctx, m, &x));
        }
        if selection.has(Selection::Special) {
            out.extend(conditions::special_reports(&ctx, m, &x));
        }
        if selection.has(Selection::Maximal) {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ m as u64);
            let n = ctx.n();
            let z = super::generate::gaussian(&mut rng, n, n);
            let w = super::generate::gaussian(&mut rng, n, n);
            out.push(conditions::maximal_c(&ctx, m, &x, &z, &w));
            out.push(conditions::maximal_d(&ctx, m, &x, &mut rng));
        }
    }
    out
}

fn candidate_matrix(ctx: &Context, m: usize, candidate: Candidate) -> Result<ComplexMatrix> {
    match candidate {
        Candidate::MWeakCore => ctx.canon.m_weak_core(m),
        Candidate::Dmp => ctx.def.dmp(),
        Candidate::Perturbed(eps) => {
            let n = ctx.n();
            let ones = ComplexMatrix::from_fn(n, n, |_, _| C64::new(eps, 0.0));
            Ok(&ctx.canon.m_weak_core(m)? + &ones)
        }
    }
}

/// `XAX = X`, `AX = (A^⊕)^m A^m P_{A^m}`, `XA = (A^⊕)^{m+1} A^m P_{A^m} A`
/// for an arbitrary `X`.
pub fn check_system1(a: &ComplexMatrix, m: usize, x: &ComplexMatrix, tol: &Tolerance) -> CheckReport {
    let name = format!("system1[m={m}]");
    match Context::new(a, tol).and_then(|ctx| system1(&ctx, m, x)) {
        Ok(r) => r,
        Err(e) => CheckReport::error(name, &e),
    }
}

fn system1(ctx: &Context, m: usize, x: &ComplexMatrix) -> Result<CheckReport> {
    let a = ctx.a;
    let tail = &ctx.pow(m) * &ctx.p(m)?;
    let ax_rhs = &ctx.core_ep_pow(m) * &tail;
    let xa_rhs = &(&ctx.core_ep_pow(m + 1) * &tail) * a;
    Ok(CheckReport::identity(
        format!("system1[m={m}]"),
        &ctx.tol,
        &[
            ("XAX = X", &(&(x * a) * x), x),
            ("AX", &(a * x), &ax_rhs),
            ("XA", &(x * a), &xa_rhs),
        ],
    ))
}

/// Route agreement for every inverse and the coincidences that do not
/// depend on `m`.
fn route_checks(ctx: &Context) -> Vec<CheckReport> {
    let tol = &ctx.tol;
    let mut out = Vec::new();
    let mut push = |name: &str, r: Result<CheckReport>| {
        out.push(r.unwrap_or_else(|e| CheckReport::error(name, &e)));
    };
    let c = &ctx.canon;

    push(
        "routes.mp",
        pinv_power_blockwise(&c.decomposition, 1, tol)
            .map(|b| CheckReport::identity("routes.mp", tol, &[("blockwise vs svd", &b, &ctx.pinv)])),
    );
    push(
        "routes.drazin",
        c.drazin()
            .map(|d| CheckReport::identity("routes.drazin", tol, &[("canonical vs cline", &d, &ctx.drazin)])),
    );
    let hs_core_ep = if rank(ctx.a, tol).map(|r| r > 0).unwrap_or(false) {
        hs::core_ep_inverse(ctx.a, tol).ok()
    } else {
        None
    };
    let ce = c.core_ep();
    let mut pairs = vec![("canonical vs definitional", &ce, &ctx.core_ep)];
    if let Some(h) = hs_core_ep.as_ref() {
        pairs.push(("hs vs canonical", h, &ce));
    }
    push("routes.core_ep", Ok(CheckReport::identity("routes.core_ep", tol, &pairs)));
    push(
        "routes.dmp",
        c.dmp().and_then(|x| {
            let d = ctx.def.dmp()?;
            Ok(CheckReport::identity("routes.dmp", tol, &[("canonical vs definitional", &x, &d)]))
        }),
    );
    push(
        "routes.wg",
        ctx.def
            .wg()
            .map(|d| CheckReport::identity("routes.wg", tol, &[("canonical vs definitional", &c.wg(), &d)])),
    );
    push(
        "routes.wc",
        c.wc().and_then(|x| {
            let d = ctx.def.wc()?;
            Ok(CheckReport::identity("routes.wc", tol, &[("canonical vs definitional", &x, &d)]))
        }),
    );
    push(
        "coincide.mwg1_wg",
        c.m_weak_group(1)
            .map(|g| CheckReport::identity("coincide.mwg1_wg", tol, &[("mwg(1) vs wg", &g, &ctx.mwg(1))])),
    );
    push(
        "coincide.mwg2_gg",
        c.m_weak_group(2).map(|g| {
            let gg = &ctx.core_ep_pow(3) * &ctx.pow(2);
            CheckReport::identity("coincide.mwg2_gg", tol, &[("mwg(2) vs (A^⊕)^3 A^2", &g, &gg)])
        }),
    );
    push(
        "coincide.mwg_drazin",
        (|| {
            let lo = ctx.k.max(1);
            let g0 = c.m_weak_group(lo)?;
            let g1 = c.m_weak_group(lo + 1)?;
            Ok(CheckReport::identity(
                "coincide.mwg_drazin",
                tol,
                &[("mwg(k) vs drazin", &g0, &ctx.drazin), ("mwg(k+1) vs drazin", &g1, &ctx.drazin)],
            ))
        })(),
    );
    out
}

fn property_checks(ctx: &Context, m: usize, x: &ComplexMatrix) -> Vec<CheckReport> {
    match property_checks_inner(ctx, m, x) {
        Ok(v) => v,
        Err(e) => vec![CheckReport::error(format!("mwc.properties[m={m}]"), &e)],
    }
}

fn property_checks_inner(ctx: &Context, m: usize, x: &ComplexMatrix) -> Result<Vec<CheckReport>> {
    let a = ctx.a;
    let tol = &ctx.tol;
    let k = ctx.k;
    let nm = |s: &str| format!("{s}[m={m}]");
    let id = |s: &str, pairs: &[(&str, &ComplexMatrix, &ComplexMatrix)]| CheckReport::identity(nm(s), tol, pairs);

    let am = ctx.pow(m);
    let am1 = ctx.pow(m + 1);
    let am_prev = ctx.pow(m - 1);
    let a2m = ctx.pow(2 * m);
    let a2m1 = ctx.pow(2 * m + 1);
    let pam = ctx.p(m)?;
    let qam = ctx.q(m)?;
    let ce = &ctx.core_ep;
    let cem = ctx.core_ep_pow(m);
    let cem1 = ctx.core_ep_pow(m + 1);
    let wgm = ctx.mwg(m);
    let wgm_prev = ctx.mwg(m - 1);
    let wg = ctx.mwg(1);
    let ax = a * x;
    let xa = x * a;
    let am_pam = &am * &pam;
    let ax_rhs = &cem * &am_pam;
    let xa_rhs = &(&cem1 * &am_pam) * a;
    let am_ep = approx_eq(&pam, &qam, tol)?;
    let mut out = Vec::new();

    // Route agreement for the inverse itself.
    let def_route = ctx.def.m_weak_core(m)?;
    let canon_route = ctx.canon.m_weak_core(m)?;
    let hs_route = if rank(a, tol)? > 0 {
        Some(hs::m_weak_core(a, m, tol)?)
    } else {
        None
    };
    let mut pairs = vec![("definitional vs canonical", &def_route, &canon_route)];
    if let Some(h) = hs_route.as_ref() {
        pairs.push(("hs vs canonical", h, &canon_route));
        pairs.push(("hs vs definitional", h, &def_route));
    }
    out.push(id("mwc.routes_agree", &pairs));

    out.push(id("mwc.product_form", &[("X = (A^⊕)^{m+1} A^m P_{A^m}", x, &(&cem1 * &am_pam))]));
    let wg_form = &(&crate::numkit::mat_pow(&wg, m)? * &am_prev) * &pam;
    out.push(id("mwc.wg_power_form", &[("X = (A^Ⓦ)^m A^{m-1} P_{A^m}", x, &wg_form)]));
    out.push(id(
        "mwc.left_product",
        &[
            ("AX = (A^⊕)^m A^m P_{A^m}", &ax, &ax_rhs),
            ("AX = A^{Ⓦ_{m-1}} A P_{A^m}", &ax, &(&(&wgm_prev * a) * &pam)),
        ],
    ));
    out.push(id("mwc.right_product", &[("XA", &xa, &xa_rhs)]));
    let xam = x * &am;
    out.push(id(
        "mwc.power_products",
        &[
            ("X A^m = A^{Ⓦ_m} A^m", &xam, &(&wgm * &am)),
            ("X A^m = (A^⊕)^{m+1} A^{2m}", &xam, &(&cem1 * &a2m)),
        ],
    ));
    for (label, y) in [("drazin", &ctx.drazin), ("core_ep", ce), ("mwg", &wgm)] {
        let yax = &(y * a) * x;
        out.push(id(&format!("mwc.outer_factor[Y={label}]"), &[("X = Y A X", x, &yax)]));
    }

    out.push(id("mwc.outer_inverse", &[("XAX = X", &(&xa * x), x)]));
    let a1 = &(a * ce) * a;
    out.push(id(
        "mwc.sandwich",
        &[
            ("A1 X A1 = A1", &(&(&a1 * x) * &a1), &a1),
            ("X A1 X = X", &(&(x * &a1) * x), x),
        ],
    ));
    out.push(id("mwc.a_x2", &[("A X^2 = X", &(&ax * x), x)]));
    let absorbs: Vec<(String, ComplexMatrix, ComplexMatrix)> = (k..=k + 2)
        .map(|l| (format!("X A^{} = A^{l}", l + 1), x * &ctx.pow(l + 1), ctx.pow(l)))
        .collect();
    let absorbs_refs: Vec<(&str, &ComplexMatrix, &ComplexMatrix)> =
        absorbs.iter().map(|(s, l, r)| (s.as_str(), l, r)).collect();
    out.push(id("mwc.absorbs_powers", &absorbs_refs));
    let dm1 = crate::numkit::mat_pow(&ctx.drazin, m + 1)?;
    out.push(id(
        "mwc.drazin_form",
        &[("X = (A^d)^{m+1} P_{A^k} A^m P_{A^m}", x, &(&(&dm1 * &ctx.p_ak) * &am_pam))],
    ));
    let pinv_form = &(&ctx.pow(k) * &ctx.def.pinv_power(k + m + 1)?) * &am_pam;
    out.push(id("mwc.pinv_power_form", &[("X = A^k (A^{k+m+1})† A^m P_{A^m}", x, &pinv_form)]));

    let rank_x = rank(x, tol)?;
    let rank_ak = rank_with_scale(&ctx.pow(k), tol, ctx.scale.powi(k as i32))?;
    out.push(CheckReport::boolean(
        nm("mwc.rank"),
        rank_x == rank_ak,
        format!("rank(X) = {rank_x}, rank(A^k) = {rank_ak}"),
    ));
    out.push(id("mwc.range", &[("P_{A^k} X = X", &(&ctx.p_ak * x), x)]));
    let b = &(&ctx.pow(k).conj_transpose() * &am) * &pam;
    let q_b = &pinv_with_scale(&b, tol, ctx.scale.powi((k + m) as i32))? * &b;
    let q_x = &pinv_with_scale(x, tol, 0.0)? * x;
    out.push(id("mwc.null_space", &[("Q_X = Q_{(A^k)* A^m P_{A^m}}", &q_x, &q_b)]));
    out.push(id("mwc.right_power", &[("X A^{m+1} = (A^⊕)^{m+1} A^{2m+1}", &(x * &am1), &(&cem1 * &a2m1))]));

    let axa = &ax * a;
    let inner = approx_eq(&axa, a, tol)?;
    let mut r = CheckReport::iff(nm("inner_inverse_iff_index_le_1"), inner, k <= 1);
    r.detail = format!("AXA = A: {inner}; index {k} <= 1: {}; residual {:e}", k <= 1, (&axa - a).max_abs());
    out.push(r);

    // More properties.
    let pinv_am = ctx.def.pinv_power(m)?;
    out.push(id(
        "more.inner_product",
        &[("AXA = A^{Ⓦ_{m-1}} A^{m+1} (A^m)† A", &axa, &(&(&(&wgm_prev * &am1) * &pinv_am) * a))],
    ));
    out.push(id(
        "more.inner_power",
        &[("A X A^m = A^{Ⓦ_{m-1}} A^{m+1}", &(&ax * &am), &(&wgm_prev * &am1))],
    ));
    out.push(id("more.mwg_power", &[("X A^m = A^{Ⓦ_m} A^m", &xam, &(&wgm * &am))]));
    if k < 2 * m {
        out.push(id("more.drazin_power", &[("X A^m = A^d A^m", &xam, &(&ctx.drazin * &am))]));
    } else {
        out.push(CheckReport::vacuous(nm("more.drazin_power"), "index >= 2m"));
    }
    let amx = &am * x;
    out.push(id("more.left_power", &[("A^m X = A^⊕ A^m P_{A^m}", &amx, &(ce * &am_pam))]));
    if am_ep {
        out.push(id("more.left_power_ep", &[("A^m X = A^⊕ A^m", &amx, &(ce * &am))]));
    } else {
        out.push(CheckReport::vacuous(nm("more.left_power_ep"), "A^m is not EP"));
    }
    out.push(id("more.two_sided", &[("A^m X A^m = A^⊕ A^{2m}", &(&amx * &am), &(ce * &a2m))]));
    let am1xam = &(&am1 * x) * &am;
    out.push(id("more.projected_power", &[("A^{m+1} X A^m = P_{A^k} A^{2m}", &am1xam, &(&ctx.p_ak * &a2m))]));
    if k < 2 * m {
        out.push(id("more.full_power", &[("A^{m+1} X A^m = A^{2m}", &am1xam, &a2m)]));
    } else {
        out.push(CheckReport::vacuous(nm("more.full_power"), "index >= 2m"));
    }

    // Characterizations.
    out.push(system1(ctx, m, x)?);
    out.push(id(
        "system1.alt",
        &[
            ("AX = A^{Ⓦ_{m-1}} A P_{A^m}", &ax, &(&(&wgm_prev * a) * &pam)),
            ("XA = A^{Ⓦ_m} P_{A^m} A", &xa, &(&(&wgm * &pam) * a)),
        ],
    ));
    let system2 = |y: &ComplexMatrix, name: &str| {
        id(
            name,
            &[
                ("AX = (A^⊕)^m A^m P_{A^m}", &(a * y), &ax_rhs),
                ("P_{A^k} X = X", &(&ctx.p_ak * y), y),
            ],
        )
    };
    out.push(system2(x, "system2"));
    let t = ctx.canon.decomposition.t_size;
    if t == 0 {
        out.push(CheckReport::vacuous(nm("system2.unique"), "R(A^k) = {0}"));
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0xE77 + m as u64);
        let n = ctx.n();
        let e = (&ctx.p_ak * &super::generate::gaussian(&mut rng, n, n)).scale_real(1e-3);
        let perturbed = system2(&(x + &e), "system2.perturbed");
        let mut r = CheckReport::boolean(
            nm("system2.unique"),
            !perturbed.passed,
            format!("perturbed residual {:e} vs threshold {:e}", perturbed.residual, perturbed.threshold),
        );
        if perturbed.passed {
            r.witness = Some(e);
        }
        out.push(r);
    }
    let mut cb = id(
        "corollary.range_form",
        &[("AX", &ax, &ax_rhs), ("P_{A^k} X = X", &(&ctx.p_ak * x), x)],
    );
    if rank_x != rank_ak {
        cb.passed = false;
        cb.detail = format!("rank(X) = {rank_x} differs from rank(A^k) = {rank_ak}");
    }
    out.push(cb);
    out.push(id(
        "corollary.square_form",
        &[("AX", &ax, &ax_rhs), ("A X^2 = X", &(&ax * x), x)],
    ));

    // Coincidences.
    if m == 1 {
        out.push(id("coincide.wc", &[("X = A^Ⓦ P_A", x, &ctx.def.wc()?)]));
    } else {
        out.push(CheckReport::vacuous(nm("coincide.wc"), "m != 1"));
    }
    if m >= k {
        out.push(id("coincide.core_ep", &[("X = A^⊕", x, ce)]));
    } else {
        out.push(CheckReport::vacuous(nm("coincide.core_ep"), "m < index"));
    }
    if k <= 1 {
        out.push(id("coincide.core", &[("X = A^# A A†", x, &ctx.def.core()?)]));
    } else {
        out.push(CheckReport::vacuous(nm("coincide.core"), "index > 1"));
    }
    if am_ep {
        out.push(id("coincide.ep_power", &[("X = A^{Ⓦ_m}", x, &wgm)]));
    } else {
        out.push(CheckReport::vacuous(nm("coincide.ep_power"), "A^m is not EP"));
    }
    Ok(out)
}
