//! Matrix index, core-EP and Hartwig–Spindelböck decompositions, and the
//! block quantities built from them.

use crate::error::{Error, Result};
use crate::numkit::{
    self, inverse_of_nonsingular, mat_pow, ordered_schur_leading, pinv_with_scale, rank_with_scale,
    spectral_norm, svd, ComplexMatrix, Tolerance,
};

/// `A = U [[T, S], [0, N]] U*` with `T` nonsingular and `N` nilpotent.
#[derive(Debug, Clone)]
pub struct CoreEpDecomposition {
    pub u: ComplexMatrix,
    /// `T`, `t x t`.
    pub t_block: ComplexMatrix,
    /// `S`, `t x (n - t)`.
    pub s_block: ComplexMatrix,
    /// `N`, `(n - t) x (n - t)`.
    pub n_block: ComplexMatrix,
    pub t_size: usize,
    pub index: usize,
    /// Spectral norm of the decomposed matrix; reference scale for rank
    /// decisions on powers of its blocks.
    pub scale: f64,
}

/// `A = U [[ΣK, ΣL], [0, 0]] U*` with `KK* + LL* = I_r`.
#[derive(Debug, Clone)]
pub struct HsDecomposition {
    pub u: ComplexMatrix,
    pub sigma: ComplexMatrix,
    pub k_block: ComplexMatrix,
    pub l_block: ComplexMatrix,
    pub r_size: usize,
}

impl HsDecomposition {
    pub fn n(&self) -> usize {
        self.u.rows()
    }

    /// `ΣK`.
    pub fn sigma_k(&self) -> ComplexMatrix {
        &self.sigma * &self.k_block
    }

    pub fn sigma_l(&self) -> ComplexMatrix {
        &self.sigma * &self.l_block
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.n();
        let r = self.r_size;
        let top = ComplexMatrix::zeros(r, n);
        let mut mid = top;
        mid.set_block(0, 0, &self.sigma_k());
        mid.set_block(0, r, &self.sigma_l());
        let mut full = ComplexMatrix::zeros(n, n);
        full.set_block(0, 0, &mid);
        &(&self.u * &full) * &self.u.conj_transpose()
    }
}

fn power_scale(scale: f64, p: usize) -> f64 {
    scale.powi(p as i32)
}

/// Smallest `k ≥ 0` with `rank(A^k) = rank(A^{k+1})`.
///
/// Ranks of `A^p` are taken against `‖A‖_2^p` so that rounding noise in a
/// numerically vanished power does not count as rank.
pub fn matrix_index(a: &ComplexMatrix, tol: &Tolerance) -> Result<usize> {
    matrix_index_with_scale(a, tol, 0.0)
}

/// [`matrix_index`] with rank cutoffs taken against `max(‖A‖_2, scale)^p`,
/// for blocks carved out of a larger matrix.
pub fn matrix_index_with_scale(a: &ComplexMatrix, tol: &Tolerance, scale: f64) -> Result<usize> {
    let n = a.ensure_square("matrix_index")?;
    let scale = spectral_norm(a, tol)?.max(scale);
    let mut prev_rank = n;
    let mut power = ComplexMatrix::identity(n);
    for k in 0..=n {
        power = &power * a;
        let r = rank_with_scale(&power, tol, power_scale(scale, k + 1))?;
        if r == prev_rank {
            return Ok(k);
        }
        prev_rank = r;
    }
    Ok(n)
}

/// Core-EP decomposition from a reordered Schur form.
///
/// The index and `t = rank(A^k)` come from singular values of powers; the
/// Schur form then places the `t` largest-modulus eigenvalues first. The
/// split is checked for a modulus gap and for `N^k ≈ 0`.
pub fn core_ep(a: &ComplexMatrix, tol: &Tolerance) -> Result<CoreEpDecomposition> {
    core_ep_with_scale(a, tol, 0.0)
}

/// [`core_ep`] with rank decisions made against `max(‖A‖_2, scale)`.
pub fn core_ep_with_scale(a: &ComplexMatrix, tol: &Tolerance, scale: f64) -> Result<CoreEpDecomposition> {
    let n = a.ensure_square("core_ep")?;
    let scale = spectral_norm(a, tol)?.max(scale);
    let index = matrix_index_with_scale(a, tol, scale)?;

    if index == 0 {
        return Ok(CoreEpDecomposition {
            u: ComplexMatrix::identity(n),
            t_block: a.clone(),
            s_block: ComplexMatrix::zeros(n, 0),
            n_block: ComplexMatrix::zeros(0, 0),
            t_size: n,
            index,
            scale,
        });
    }

    let ak = mat_pow(a, index)?;
    let t = rank_with_scale(&ak, tol, power_scale(scale, index))?;
    if t == 0 {
        return Ok(CoreEpDecomposition {
            u: ComplexMatrix::identity(n),
            t_block: ComplexMatrix::zeros(0, 0),
            s_block: ComplexMatrix::zeros(0, n),
            n_block: a.clone(),
            t_size: 0,
            index,
            scale,
        });
    }

    let schur = ordered_schur_leading(a, t)?;
    let r = &schur.r;
    let d = CoreEpDecomposition {
        u: schur.u.clone(),
        t_block: r.block(0, 0, t, t),
        s_block: r.block(0, t, t, n - t),
        n_block: r.block(t, t, n - t, n - t),
        t_size: t,
        index,
        scale,
    };

    let diag = r.diagonal();
    let t_min = diag[..t].iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let n_max = diag[t..].iter().map(|z| z.norm()).fold(0.0, f64::max);
    if !(t_min > n_max) {
        return Err(Error::Inconsistent(format!(
            "no eigenvalue gap at split {t}: min |T_ii| = {t_min:e}, max |N_ii| = {n_max:e}"
        )));
    }
    let nk = mat_pow(&d.n_block, index)?;
    let bound = tol.eq_threshold(0.0, power_scale(scale, index));
    if nk.max_abs() > bound {
        return Err(Error::Inconsistent(format!(
            "N^{index} has entries of size {:e}, above {bound:e}",
            nk.max_abs()
        )));
    }
    Ok(d)
}

impl CoreEpDecomposition {
    pub fn n(&self) -> usize {
        self.u.rows()
    }

    /// `U [[T, S], [0, N]] U*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let z = ComplexMatrix::zeros(self.n() - self.t_size, self.t_size);
        let b = ComplexMatrix::from_blocks(&self.t_block, &self.s_block, &z, &self.n_block)
            .expect("consistent block sizes");
        self.from_block_form(&b)
    }

    /// `U B U*`.
    pub fn from_block_form(&self, b: &ComplexMatrix) -> ComplexMatrix {
        &(&self.u * b) * &self.u.conj_transpose()
    }

    /// `U* X U`.
    pub fn to_block_form(&self, x: &ComplexMatrix) -> ComplexMatrix {
        &(&self.u.conj_transpose() * x) * &self.u
    }

    /// `U [[x11, x12], [0, 0]] U*`.
    pub fn upper_form(&self, x11: &ComplexMatrix, x12: &ComplexMatrix) -> ComplexMatrix {
        let m = self.n() - self.t_size;
        let b = ComplexMatrix::from_blocks(
            x11,
            x12,
            &ComplexMatrix::zeros(m, self.t_size),
            &ComplexMatrix::zeros(m, m),
        )
        .expect("consistent block sizes");
        self.from_block_form(&b)
    }

    pub fn t_inverse(&self, tol: &Tolerance) -> Result<ComplexMatrix> {
        inverse_of_nonsingular(&self.t_block, tol)
    }

    /// `T^p` for any integer `p` (negative powers through `T^{-1}`).
    pub fn t_power(&self, p: i64, tol: &Tolerance) -> Result<ComplexMatrix> {
        if p >= 0 {
            mat_pow(&self.t_block, p as usize)
        } else {
            mat_pow(&self.t_inverse(tol)?, p.unsigned_abs() as usize)
        }
    }

    /// `N^p`; exactly zero once `p` reaches the index.
    pub fn n_power(&self, p: usize) -> Result<ComplexMatrix> {
        let m = self.n() - self.t_size;
        if p >= self.index && p > 0 {
            return Ok(ComplexMatrix::zeros(m, m));
        }
        mat_pow(&self.n_block, p)
    }

    /// `(N^p)†`.
    pub fn n_power_pinv(&self, p: usize, tol: &Tolerance) -> Result<ComplexMatrix> {
        let np = self.n_power(p)?;
        pinv_with_scale(&np, tol, power_scale(self.scale, p))
    }

    /// `P_{N^p}`; zero for `p ≥ k`, identity for `p = 0`.
    pub fn n_range_projector(&self, p: usize, tol: &Tolerance) -> Result<ComplexMatrix> {
        let np = self.n_power(p)?;
        numkit::range_projector(&np, tol, power_scale(self.scale, p))
    }

    /// `Q_{N^p}`.
    pub fn n_corange_projector(&self, p: usize, tol: &Tolerance) -> Result<ComplexMatrix> {
        let np = self.n_power(p)?;
        numkit::corange_projector(&np, tol, power_scale(self.scale, p))
    }

    /// `Σ_{i<ℓ} T^i S N^{ℓ-1-i}`, with the empty sum at `ℓ = 0`.
    pub(crate) fn t_tilde_raw(&self, ell: usize) -> Result<ComplexMatrix> {
        let mut acc = ComplexMatrix::zeros(self.t_size, self.n() - self.t_size);
        // T̃_{j+1} = T T̃_j + S N^j
        for j in 0..ell {
            let snj = &self.s_block * &self.n_power(j)?;
            acc = &(&self.t_block * &acc) + &snj;
        }
        Ok(acc)
    }

    /// `U [[I_t, 0], [0, P_{N^ℓ}]] U*`.
    pub fn projector_power_blockwise(&self, ell: usize, tol: &Tolerance) -> Result<ComplexMatrix> {
        let m = self.n() - self.t_size;
        let b = ComplexMatrix::from_blocks(
            &ComplexMatrix::identity(self.t_size),
            &ComplexMatrix::zeros(self.t_size, m),
            &ComplexMatrix::zeros(m, self.t_size),
            &self.n_range_projector(ell, tol)?,
        )?;
        Ok(self.from_block_form(&b))
    }
}

/// `T̃_ℓ` for `ℓ ≥ 1`.
pub fn t_tilde(d: &CoreEpDecomposition, ell: usize) -> Result<ComplexMatrix> {
    if ell == 0 {
        return Err(Error::InvalidArgument("t_tilde requires ell >= 1".into()));
    }
    d.t_tilde_raw(ell)
}

/// `(A^ℓ)†` assembled from the blocks of the decomposition.
pub fn pinv_power_blockwise(d: &CoreEpDecomposition, ell: usize, tol: &Tolerance) -> Result<ComplexMatrix> {
    if ell == 0 {
        return Err(Error::InvalidArgument("pinv_power_blockwise requires ell >= 1".into()));
    }
    let t = d.t_size;
    let m = d.n() - t;
    let tl = d.t_power(ell as i64, tol)?;
    let tt = d.t_tilde_raw(ell)?;
    let np = d.n_power_pinv(ell, tol)?;
    let q = d.n_corange_projector(ell, tol)?;
    let omega = &tt * &(&ComplexMatrix::identity(m) - &q);
    let gram = &(&tl * &tl.conj_transpose()) + &(&omega * &omega.conj_transpose());
    let delta = inverse_of_nonsingular(&gram, tol)?;

    let tl_star_delta = &tl.conj_transpose() * &delta;
    let omega_star_delta = &omega.conj_transpose() * &delta;
    let tail = &tt * &np;
    let x11 = tl_star_delta.clone();
    let x12 = -&(&tl_star_delta * &tail);
    let x21 = omega_star_delta.clone();
    let x22 = &np - &(&omega_star_delta * &tail);
    let b = ComplexMatrix::from_blocks(&x11, &x12, &x21, &x22)?;
    Ok(d.from_block_form(&b))
}

/// `P_{A^ℓ} = A^ℓ (A^ℓ)†` for `ℓ ≥ 1`.
pub fn projector_power(a: &ComplexMatrix, ell: usize, tol: &Tolerance) -> Result<ComplexMatrix> {
    if ell == 0 {
        return Err(Error::InvalidArgument("projector_power requires ell >= 1".into()));
    }
    let scale = spectral_norm(a, tol)?;
    let al = mat_pow(a, ell)?;
    numkit::range_projector(&al, tol, power_scale(scale, ell))
}

/// Hartwig–Spindelböck decomposition from the SVD `A = W Σ' V*`:
/// `U = W` and `[K | L]` is the first `r` rows of `V* W`.
pub fn hs_decompose(a: &ComplexMatrix, tol: &Tolerance) -> Result<HsDecomposition> {
    let n = a.ensure_square("hs_decompose")?;
    let s = svd(a, tol)?;
    let r = numkit::rank(a, tol)?;
    if r == 0 {
        return Err(Error::Precondition("HS undefined for rank 0".into()));
    }
    let sigma = ComplexMatrix::from_real_diagonal(&s.sigma[..r]);
    let vw = &s.v.conj_transpose() * &s.u;
    Ok(HsDecomposition {
        u: s.u,
        sigma,
        k_block: vw.block(0, 0, r, r),
        l_block: vw.block(0, r, r, n - r),
        r_size: r,
    })
}
