use crate::decomp::core_ep;
use crate::error::Result;
use crate::inverses::{Canonical, Definitional};
use crate::numkit::{mat_pow, spectral_norm, ComplexMatrix, Tolerance};

/// Quantities of one matrix shared by every check.
///
/// The inverses on the right-hand sides of identities come from the
/// definitional product formulas; the matrix under test comes from the
/// core-EP block form, so each identity compares two independent routes.
pub(crate) struct Context<'a> {
    pub a: &'a ComplexMatrix,
    pub tol: Tolerance,
    pub k: usize,
    pub scale: f64,
    pub def: Definitional<'a>,
    pub canon: Canonical,
    pub pinv: ComplexMatrix,
    pub drazin: ComplexMatrix,
    pub core_ep: ComplexMatrix,
    /// `P_{A^ℓ}` for `ℓ = max(k, 1)`; equal for every `ℓ ≥ k`.
    pub p_ak: ComplexMatrix,
}

impl<'a> Context<'a> {
    pub fn new(a: &'a ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        let def = Definitional::new(a, tol)?;
        let canon = Canonical::new(core_ep(a, tol)?, tol)?;
        let k = def.index();
        Ok(Self {
            a,
            tol: *tol,
            k,
            scale: spectral_norm(a, tol)?,
            pinv: def.moore_penrose()?,
            drazin: def.drazin()?,
            core_ep: def.core_ep()?,
            p_ak: def.range_projector(k.max(1))?,
            def,
            canon,
        })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn pow(&self, p: usize) -> ComplexMatrix {
        self.def.power(p)
    }

    /// `(A^⊕)^p`.
    pub fn core_ep_pow(&self, p: usize) -> ComplexMatrix {
        mat_pow(&self.core_ep, p).expect("square")
    }

    /// `A^{Ⓦ_m} = (A^⊕)^{m+1} A^m`; `m = 0` gives `A^⊕`.
    pub fn mwg(&self, m: usize) -> ComplexMatrix {
        &self.core_ep_pow(m + 1) * &self.pow(m)
    }

    /// `P_{A^p}`.
    pub fn p(&self, p: usize) -> Result<ComplexMatrix> {
        self.def.range_projector(p)
    }

    pub fn q(&self, p: usize) -> Result<ComplexMatrix> {
        self.def.corange_projector(p)
    }
}
