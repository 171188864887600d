//! Routes through the Hartwig–Spindelböck decomposition: every inverse is
//! `U [[F(ΣK), 0], [0, 0]] U*` for a function `F` of the `r x r` block `ΣK`.

use super::canonical::Canonical;
use crate::decomp::{core_ep_with_scale, hs_decompose, HsDecomposition};
use crate::error::Result;
use crate::numkit::{ComplexMatrix, Tolerance};

fn embed(h: &HsDecomposition, f: &ComplexMatrix) -> ComplexMatrix {
    let n = h.n();
    let mut b = ComplexMatrix::zeros(n, n);
    b.set_block(0, 0, f);
    &(&h.u * &b) * &h.u.conj_transpose()
}

/// Canonical form of `ΣK`, with rank decisions scaled by `‖A‖_2 = σ_1`
/// so that a numerically vanished `ΣK` is not mistaken for a small
/// nonsingular block.
fn inner(h: &HsDecomposition, tol: &Tolerance) -> Result<Canonical> {
    let scale = h.sigma.as_slice().first().map_or(0.0, |z| z.re);
    Canonical::new(core_ep_with_scale(&h.sigma_k(), tol, scale)?, tol)
}

/// `U [[(ΣK)^{Ⓦ_m} P_{(ΣK)^{m-1}}, 0], [0, 0]] U*`, with `P_{(ΣK)^0} = I`.
pub fn m_weak_core(a: &ComplexMatrix, m: usize, tol: &Tolerance) -> Result<ComplexMatrix> {
    let h = hs_decompose(a, tol)?;
    let inner = inner(&h, tol)?;
    let proj = inner.decomposition.projector_power_blockwise(m - 1, tol)?;
    Ok(embed(&h, &(&inner.m_weak_group(m)? * &proj)))
}

/// The `m = 1` case.
pub fn wc(a: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    m_weak_core(a, 1, tol)
}

/// `U [[(ΣK)^⊕, 0], [0, 0]] U*`.
pub fn core_ep_inverse(a: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let h = hs_decompose(a, tol)?;
    let inner = inner(&h, tol)?;
    Ok(embed(&h, &inner.core_ep()))
}
