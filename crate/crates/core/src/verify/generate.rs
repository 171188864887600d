//! Random matrices with prescribed index and core rank, built as
//! `U [[T, S], [0, N]] U*` from random blocks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::decomp::matrix_index;
use crate::error::{Error, Result};
use crate::numkit::{mat_pow, qr, range_projector, rank_with_scale, spectral_norm, ComplexMatrix, Tolerance, C64};

const MAX_ATTEMPTS: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceSpec {
    pub n: usize,
    /// `rank(A^k)`.
    pub t: usize,
    pub index: usize,
    pub seed: u64,
    /// Upper bound on the condition number of `T`.
    pub condition_cap: f64,
}

impl InstanceSpec {
    pub fn new(n: usize, t: usize, index: usize, seed: u64) -> Self {
        Self {
            n,
            t,
            index,
            seed,
            condition_cap: 100.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Precondition(format!("infeasible instance spec: {msg}")));
        if !(1..=16).contains(&self.n) {
            return bad(format!("n = {} is outside 1..=16", self.n));
        }
        if self.t > self.n {
            return bad(format!("t = {} exceeds n = {}", self.t, self.n));
        }
        if self.index > self.n - self.t {
            return bad(format!("index {} exceeds n - t = {}", self.index, self.n - self.t));
        }
        if self.index == 0 && self.t != self.n {
            return bad("index 0 requires t = n".into());
        }
        if !(self.condition_cap >= 1.0 && self.condition_cap.is_finite()) {
            return bad(format!("condition cap {} must be a finite number >= 1", self.condition_cap));
        }
        Ok(())
    }
}

/// Structural condition imposed on the blocks before conjugation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plant {
    None,
    /// `S = 0` and `N = 0`; needs index ≤ 1.
    ZeroSAndN,
    ZeroS,
    /// `S = S0 (I - P_{N^m})`, which forces `T̃_m N^m = 0`.
    TildeAnnihilatesPower(usize),
    /// `S` solved so that `T̃_m = M0 P_{N^m}`, i.e. `T̃_m (I - P_{N^m}) = 0`.
    TildeInPowerRange(usize),
    /// `S = S0 (I - P_N)`.
    SOrthogonalToN,
    /// `T` Hermitian with eigenvalues ±1, `S = 0`, `N = 0`.
    EpTripotent,
    /// `T` unitary, `S = 0`, `N = 0`.
    EpPartialIsometry,
    /// `T = I`, `N = 0`.
    Idempotent,
}

impl Plant {
    fn needs_zero_n(&self) -> bool {
        matches!(
            self,
            Plant::ZeroSAndN | Plant::EpTripotent | Plant::EpPartialIsometry | Plant::Idempotent
        )
    }
}

/// A generated matrix together with the blocks it was built from.
#[derive(Debug, Clone)]
pub struct Instance {
    pub a: ComplexMatrix,
    pub u: ComplexMatrix,
    pub t_block: ComplexMatrix,
    pub s_block: ComplexMatrix,
    pub n_block: ComplexMatrix,
}

pub fn generate(spec: &InstanceSpec) -> Result<ComplexMatrix> {
    Ok(generate_planted(spec, Plant::None)?.a)
}

pub fn generate_planted(spec: &InstanceSpec, plant: Plant) -> Result<Instance> {
    spec.validate()?;
    if plant.needs_zero_n() && spec.index > 1 {
        return Err(Error::Precondition(format!(
            "plant {plant:?} needs index at most 1, spec has {}",
            spec.index
        )));
    }
    let tol = Tolerance::default();
    let mut last = String::new();
    for attempt in 0..MAX_ATTEMPTS {
        let seed = spec.seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = build(spec, plant, &mut rng, &tol)?;
        match confirm(spec, &inst.a, &tol) {
            Ok(()) => return Ok(inst),
            Err(msg) => last = msg,
        }
    }
    Err(Error::Inconsistent(format!(
        "no instance matched the spec after {MAX_ATTEMPTS} attempts: {last}"
    )))
}

fn confirm(spec: &InstanceSpec, a: &ComplexMatrix, tol: &Tolerance) -> std::result::Result<(), String> {
    let k = matrix_index(a, tol).map_err(|e| e.to_string())?;
    if k != spec.index {
        return Err(format!("index {k}, wanted {}", spec.index));
    }
    let scale = spectral_norm(a, tol).map_err(|e| e.to_string())?;
    let ak = mat_pow(a, k).map_err(|e| e.to_string())?;
    let t = rank_with_scale(&ak, tol, scale.powi(k as i32)).map_err(|e| e.to_string())?;
    if t != spec.t {
        return Err(format!("rank(A^k) = {t}, wanted {}", spec.t));
    }
    Ok(())
}

fn normal(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub(crate) fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| normal(rng))
}

/// Haar-distributed unitary: QR of a Gaussian with the phases of `R`'s
/// diagonal moved into `Q`.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let (mut q, r) = qr(&gaussian(rng, n, n));
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn unit_phase(rng: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// `W diag(s) V*` with singular values in `[1, cap^{1/8}]`.
///
/// The narrow band keeps high powers of `T` (up to about `T^17`, reached by
/// the pseudoinverse formulas at index 4) well conditioned.
fn random_t(rng: &mut ChaCha8Rng, t: usize, cap: f64) -> ComplexMatrix {
    let w = random_unitary(rng, t);
    let v = random_unitary(rng, t);
    let s: Vec<f64> = (0..t).map(|_| cap.powf(rng.random_range(0.0..=1.0) / 8.0)).collect();
    &(&w * &ComplexMatrix::from_real_diagonal(&s)) * &v.conj_transpose()
}

/// Block diagonal nilpotent matrix whose largest block has size `k`.
fn random_n(rng: &mut ChaCha8Rng, size: usize, k: usize) -> ComplexMatrix {
    let mut n = ComplexMatrix::zeros(size, size);
    if k <= 1 {
        return n;
    }
    let mut blocks = vec![k];
    let mut left = size - k;
    while left > 0 {
        let b = rng.random_range(1..=k.min(left));
        blocks.push(b);
        left -= b;
    }
    let mut off = 0;
    for b in blocks {
        for i in 0..b {
            for j in i + 1..b {
                n[(off + i, off + j)] = if j == i + 1 {
                    unit_phase(rng) * rng.random_range(0.5..=1.0)
                } else {
                    normal(rng) * 0.3
                };
            }
        }
        off += b;
    }
    n
}

fn build(spec: &InstanceSpec, plant: Plant, rng: &mut ChaCha8Rng, tol: &Tolerance) -> Result<Instance> {
    let (n, t, k) = (spec.n, spec.t, spec.index);
    let u = random_unitary(rng, n);
    let mut t_block = random_t(rng, t, spec.condition_cap);
    let mut s_block = gaussian(rng, t, n - t).scale_real(0.5);
    let n_block = random_n(rng, n - t, k);
    let id = ComplexMatrix::identity(n - t);

    match plant {
        Plant::None => {}
        Plant::ZeroSAndN | Plant::ZeroS => s_block = ComplexMatrix::zeros(t, n - t),
        Plant::TildeAnnihilatesPower(m) => {
            let p = range_projector(&mat_pow(&n_block, m)?, tol, 1.0)?;
            s_block = &s_block * &(&id - &p);
        }
        Plant::TildeInPowerRange(m) => {
            let p = range_projector(&mat_pow(&n_block, m)?, tol, 1.0)?;
            let target = &gaussian(rng, t, n - t) * &p;
            s_block = solve_for_s(&t_block, &n_block, m, &target, tol)?;
        }
        Plant::SOrthogonalToN => {
            let p = range_projector(&n_block, tol, 1.0)?;
            s_block = &s_block * &(&id - &p);
        }
        Plant::EpTripotent => {
            let w = random_unitary(rng, t);
            let signs: Vec<f64> = (0..t).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
            t_block = &(&w * &ComplexMatrix::from_real_diagonal(&signs)) * &w.conj_transpose();
            s_block = ComplexMatrix::zeros(t, n - t);
        }
        Plant::EpPartialIsometry => {
            t_block = random_unitary(rng, t);
            s_block = ComplexMatrix::zeros(t, n - t);
        }
        Plant::Idempotent => t_block = ComplexMatrix::identity(t),
    }

    let b = ComplexMatrix::from_blocks(&t_block, &s_block, &ComplexMatrix::zeros(n - t, t), &n_block)?;
    let a = &(&u * &b) * &u.conj_transpose();
    Ok(Instance {
        a,
        u,
        t_block,
        s_block,
        n_block,
    })
}

/// Solves `Σ_{i<m} T^i S N^{m-1-i} = target` for `S`, given `N` strictly
/// upper triangular: column `c` of the left side is `T^{m-1} S[:, c]` plus
/// terms in earlier columns of `S`.
pub fn solve_for_s(
    t: &ComplexMatrix,
    n: &ComplexMatrix,
    m: usize,
    target: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<ComplexMatrix> {
    if m == 0 {
        return Err(Error::InvalidArgument("solve_for_s requires m >= 1".into()));
    }
    let (ts, ns) = (t.rows(), n.rows());
    let t_pows: Vec<ComplexMatrix> = (0..m).map(|i| mat_pow(t, i)).collect::<Result<_>>()?;
    let n_pows: Vec<ComplexMatrix> = (0..m).map(|j| mat_pow(n, j)).collect::<Result<_>>()?;
    let lead_inv = crate::numkit::inverse_of_nonsingular(&t_pows[m - 1], tol)?;
    let mut s = ComplexMatrix::zeros(ts, ns);
    for c in 0..ns {
        let mut rhs = target.block(0, c, ts, 1);
        for i in 0..m - 1 {
            let np = &n_pows[m - 1 - i];
            let mut col = ComplexMatrix::zeros(ts, 1);
            for r in 0..c {
                let coef = np[(r, c)];
                if coef != C64::new(0.0, 0.0) {
                    col = &col + &s.block(0, r, ts, 1).scale(coef);
                }
            }
            rhs = &rhs - &(&t_pows[i] * &col);
        }
        s.set_block(0, c, &(&lead_inv * &rhs));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::t_tilde;
    use crate::decomp::CoreEpDecomposition;
    use crate::numkit::rank;

    #[test]
    fn nonsingular_spec() {
        let a = generate(&InstanceSpec::new(3, 3, 0, 1)).unwrap();
        assert_eq!(rank(&a, &Tolerance::default()).unwrap(), 3);
    }

    #[test]
    fn full_nilpotent_block() {
        let a = generate(&InstanceSpec::new(4, 0, 4, 2)).unwrap();
        assert!(mat_pow(&a, 3).unwrap().max_abs() > 1e-3);
        assert!(mat_pow(&a, 4).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn seeded_spec_hits_index_and_rank() {
        let tol = Tolerance::default();
        let a = generate(&InstanceSpec::new(6, 2, 3, 42)).unwrap();
        assert_eq!(matrix_index(&a, &tol).unwrap(), 3);
        let a3 = mat_pow(&a, 3).unwrap();
        let scale = spectral_norm(&a, &tol).unwrap().powi(3);
        assert_eq!(rank_with_scale(&a3, &tol, scale).unwrap(), 2);
    }

    #[test]
    fn deterministic() {
        let spec = InstanceSpec::new(7, 3, 2, 99);
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
    }

    #[test]
    fn infeasible_specs() {
        for spec in [
            InstanceSpec::new(4, 2, 5, 0),
            InstanceSpec::new(4, 3, 0, 0),
            InstanceSpec::new(0, 0, 0, 0),
            InstanceSpec::new(17, 17, 0, 0),
            InstanceSpec::new(4, 4, 1, 0),
        ] {
            assert!(matches!(generate(&spec), Err(Error::Precondition(_))), "{spec:?}");
        }
        let mut spec = InstanceSpec::new(3, 3, 0, 0);
        spec.condition_cap = 0.5;
        assert!(generate(&spec).is_err());
    }

    #[test]
    fn plant_requires_small_index() {
        let err = generate_planted(&InstanceSpec::new(5, 2, 3, 0), Plant::ZeroSAndN).unwrap_err();
        assert!(err.is_precondition());
    }

    #[test]
    fn solve_for_s_hits_target() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = random_t(&mut rng, 3, 100.0);
        let n = random_n(&mut rng, 5, 3);
        let target = gaussian(&mut rng, 3, 5);
        for m in 1..=4 {
            let s = solve_for_s(&t, &n, m, &target, &tol).unwrap();
            let d = CoreEpDecomposition {
                u: ComplexMatrix::identity(8),
                t_block: t.clone(),
                s_block: s,
                n_block: n.clone(),
                t_size: 3,
                index: 3,
                scale: 1.0,
            };
            assert!((&t_tilde(&d, m).unwrap() - &target).max_abs() < 1e-10, "m={m}");
        }
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let q = random_unitary(&mut rng, 6);
        assert!((&(&q.conj_transpose() * &q) - &ComplexMatrix::identity(6)).max_abs() < 1e-13);
    }
}
