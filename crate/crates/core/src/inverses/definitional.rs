//! Product formulas that only use powers, pseudoinverses and projectors of
//! `A` itself; no decomposition is involved.

use crate::decomp::matrix_index;
use crate::error::Result;
use crate::numkit::{self, mat_pow, pinv_with_scale, spectral_norm, ComplexMatrix, Tolerance};

/// Powers, pseudoinverses and projectors of one matrix, with rank cutoffs
/// referenced to `‖A‖_2^p`.
pub struct Definitional<'a> {
    a: &'a ComplexMatrix,
    tol: Tolerance,
    scale: f64,
    index: usize,
}

impl<'a> Definitional<'a> {
    pub fn new(a: &'a ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        a.ensure_square("generalized inverse")?;
        Ok(Self {
            a,
            tol: *tol,
            scale: spectral_norm(a, tol)?,
            index: matrix_index(a, tol)?,
        })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn power(&self, p: usize) -> ComplexMatrix {
        mat_pow(self.a, p).expect("square")
    }

    /// `(A^p)†`.
    pub fn pinv_power(&self, p: usize) -> Result<ComplexMatrix> {
        pinv_with_scale(&self.power(p), &self.tol, self.scale.powi(p as i32))
    }

    /// `P_{A^p}`; identity at `p = 0`.
    pub fn range_projector(&self, p: usize) -> Result<ComplexMatrix> {
        numkit::range_projector(&self.power(p), &self.tol, self.scale.powi(p as i32))
    }

    /// `Q_{A^p}`.
    pub fn corange_projector(&self, p: usize) -> Result<ComplexMatrix> {
        numkit::corange_projector(&self.power(p), &self.tol, self.scale.powi(p as i32))
    }

    pub fn moore_penrose(&self) -> Result<ComplexMatrix> {
        self.pinv_power(1)
    }

    /// `A^k (A^{2k+1})† A^k`.
    pub fn drazin(&self) -> Result<ComplexMatrix> {
        let k = self.index;
        let ak = self.power(k);
        Ok(&(&ak * &self.pinv_power(2 * k + 1)?) * &ak)
    }

    /// `A^d P_{A^k}`.
    pub fn core_ep(&self) -> Result<ComplexMatrix> {
        Ok(&self.drazin()? * &self.range_projector(self.index)?)
    }

    /// `(A^⊕)^{m+1} A^m`.
    pub fn m_weak_group(&self, m: usize) -> Result<ComplexMatrix> {
        let ce = mat_pow(&self.core_ep()?, m + 1)?;
        Ok(&ce * &self.power(m))
    }

    /// `(A^⊕)^2 A`.
    pub fn wg(&self) -> Result<ComplexMatrix> {
        self.m_weak_group(1)
    }

    /// `A^{Ⓦ_m} P_{A^m}`.
    pub fn m_weak_core(&self, m: usize) -> Result<ComplexMatrix> {
        Ok(&self.m_weak_group(m)? * &self.range_projector(m)?)
    }

    /// `A^Ⓦ P_A`.
    pub fn wc(&self) -> Result<ComplexMatrix> {
        Ok(&self.wg()? * &self.range_projector(1)?)
    }

    /// `A^d A A†`.
    pub fn dmp(&self) -> Result<ComplexMatrix> {
        Ok(&(&self.drazin()? * self.a) * &self.moore_penrose()?)
    }

    /// `A^# A A†`; meaningful only for index at most 1.
    pub fn core(&self) -> Result<ComplexMatrix> {
        self.dmp()
    }
}
