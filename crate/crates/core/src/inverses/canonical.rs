//! Block forms `U [[T^{-1}, X12], [0, 0]] U*` over one core-EP decomposition.

use crate::decomp::CoreEpDecomposition;
use crate::error::Result;
use crate::numkit::{mat_pow, ComplexMatrix, Tolerance};

/// Shares one decomposition and `T^{-1}` across every inverse of `A`.
#[derive(Debug, Clone)]
pub struct Canonical {
    pub decomposition: CoreEpDecomposition,
    t_inv: ComplexMatrix,
    tol: Tolerance,
}

impl Canonical {
    pub fn new(decomposition: CoreEpDecomposition, tol: &Tolerance) -> Result<Self> {
        let t_inv = decomposition.t_inverse(tol)?;
        Ok(Self {
            decomposition,
            t_inv,
            tol: *tol,
        })
    }

    pub fn index(&self) -> usize {
        self.decomposition.index
    }

    pub fn t_inverse(&self) -> &ComplexMatrix {
        &self.t_inv
    }

    /// `T^{-p}`.
    pub fn t_inv_power(&self, p: usize) -> ComplexMatrix {
        mat_pow(&self.t_inv, p).expect("square")
    }

    fn assemble(&self, x12: &ComplexMatrix) -> ComplexMatrix {
        self.decomposition.upper_form(&self.t_inv, x12)
    }

    fn zero_x12(&self) -> ComplexMatrix {
        let d = &self.decomposition;
        ComplexMatrix::zeros(d.t_size, d.n() - d.t_size)
    }

    /// `T^{-(p+1)} T̃_p`.
    fn lifted_tilde(&self, p: usize) -> Result<ComplexMatrix> {
        Ok(&self.t_inv_power(p + 1) * &self.decomposition.t_tilde_raw(p)?)
    }

    pub fn drazin(&self) -> Result<ComplexMatrix> {
        Ok(self.assemble(&self.lifted_tilde(self.index())?))
    }

    pub fn core_ep(&self) -> ComplexMatrix {
        self.assemble(&self.zero_x12())
    }

    pub fn dmp(&self) -> Result<ComplexMatrix> {
        let pn = self.decomposition.n_range_projector(1, &self.tol)?;
        Ok(self.assemble(&(&self.lifted_tilde(self.index())? * &pn)))
    }

    pub fn wg(&self) -> ComplexMatrix {
        let x12 = &self.t_inv_power(2) * &self.decomposition.s_block;
        self.assemble(&x12)
    }

    /// `m = 0` gives the core-EP inverse.
    pub fn m_weak_group(&self, m: usize) -> Result<ComplexMatrix> {
        Ok(self.assemble(&self.lifted_tilde(m)?))
    }

    pub fn wc(&self) -> Result<ComplexMatrix> {
        let pn = self.decomposition.n_range_projector(1, &self.tol)?;
        let x12 = &(&self.t_inv_power(2) * &self.decomposition.s_block) * &pn;
        Ok(self.assemble(&x12))
    }

    pub fn m_weak_core(&self, m: usize) -> Result<ComplexMatrix> {
        let pnm = self.decomposition.n_range_projector(m, &self.tol)?;
        Ok(self.assemble(&(&self.lifted_tilde(m)? * &pnm)))
    }
}
