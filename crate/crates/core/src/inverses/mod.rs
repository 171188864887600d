//! The ten generalized inverses and the routes that compute them.
//!
//! [`compute`] uses the core-EP block form. [`compute_by`] selects a route
//! explicitly so the routes can be cross-checked against each other.

pub mod canonical;
pub mod definitional;
pub mod hs;

use std::fmt;

use crate::decomp::{core_ep, matrix_index};
use crate::error::{Error, Result};
use crate::numkit::{ComplexMatrix, Tolerance};

pub use canonical::Canonical;
pub use definitional::Definitional;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InverseKind {
    MoorePenrose,
    Group,
    Drazin,
    Core,
    CoreEp,
    Dmp,
    Wg,
    MWeakGroup(usize),
    Wc,
    MWeakCore(usize),
}

impl InverseKind {
    /// Short name as used on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            InverseKind::MoorePenrose => "mp",
            InverseKind::Group => "group",
            InverseKind::Drazin => "drazin",
            InverseKind::Core => "core",
            InverseKind::CoreEp => "core-ep",
            InverseKind::Dmp => "dmp",
            InverseKind::Wg => "wg",
            InverseKind::MWeakGroup(_) => "mwg",
            InverseKind::Wc => "wc",
            InverseKind::MWeakCore(_) => "mwc",
        }
    }

    /// Parses a short name; `m` is required by `mwg` and `mwc` and ignored
    /// otherwise.
    pub fn parse(name: &str, m: Option<usize>) -> Result<Self> {
        let need_m = |kind: fn(usize) -> InverseKind| {
            m.map(kind)
                .ok_or_else(|| Error::InvalidArgument(format!("kind {name} requires --m")))
        };
        let kind = match name {
            "mp" => InverseKind::MoorePenrose,
            "group" => InverseKind::Group,
            "drazin" => InverseKind::Drazin,
            "core" => InverseKind::Core,
            "core-ep" => InverseKind::CoreEp,
            "dmp" => InverseKind::Dmp,
            "wg" => InverseKind::Wg,
            "mwg" => need_m(InverseKind::MWeakGroup)?,
            "wc" => InverseKind::Wc,
            "mwc" => need_m(InverseKind::MWeakCore)?,
            other => return Err(Error::InvalidArgument(format!("unknown inverse kind {other:?}"))),
        };
        kind.validate()?;
        Ok(kind)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            InverseKind::MWeakGroup(0) | InverseKind::MWeakCore(0) => {
                Err(Error::InvalidArgument("m must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn supports(&self, route: Route) -> bool {
        match route {
            Route::HartwigSpindelbock => {
                matches!(self, InverseKind::MWeakCore(_) | InverseKind::Wc | InverseKind::CoreEp)
            }
            _ => true,
        }
    }
}

impl fmt::Display for InverseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InverseKind::MWeakGroup(m) | InverseKind::MWeakCore(m) => write!(f, "{}(m={m})", self.name()),
            _ => f.write_str(self.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    Definitional,
    CoreEpCanonical,
    HartwigSpindelbock,
}

impl Route {
    pub fn name(&self) -> &'static str {
        match self {
            Route::Definitional => "def",
            Route::CoreEpCanonical => "canonical",
            Route::HartwigSpindelbock => "hs",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "def" | "definitional" => Ok(Route::Definitional),
            "canonical" => Ok(Route::CoreEpCanonical),
            "hs" => Ok(Route::HartwigSpindelbock),
            other => Err(Error::InvalidArgument(format!("unknown route {other:?}"))),
        }
    }
}

/// An inverse together with non-fatal numerical warnings.
#[derive(Debug, Clone)]
pub struct Computed {
    pub matrix: ComplexMatrix,
    pub warnings: Vec<String>,
}

/// Condition estimate of `T` above which a warning is attached.
pub const T_CONDITION_WARNING: f64 = 1e8;

fn require_index_le_1(index: usize, what: &str) -> Result<()> {
    if index > 1 {
        Err(Error::Precondition(format!("{what} (index is {index})")))
    } else {
        Ok(())
    }
}

const GROUP_MSG: &str = "group inverse requires index ≤ 1";
const CORE_MSG: &str = "core inverse exists iff Ind(A) ≤ 1";

pub fn compute(a: &ComplexMatrix, kind: InverseKind, tol: &Tolerance) -> Result<ComplexMatrix> {
    compute_by(a, kind, Route::CoreEpCanonical, tol)
}

pub fn compute_by(a: &ComplexMatrix, kind: InverseKind, route: Route, tol: &Tolerance) -> Result<ComplexMatrix> {
    Ok(compute_with_diagnostics(a, kind, route, tol)?.matrix)
}

pub fn compute_with_diagnostics(
    a: &ComplexMatrix,
    kind: InverseKind,
    route: Route,
    tol: &Tolerance,
) -> Result<Computed> {
    a.ensure_square("generalized inverse")?;
    kind.validate()?;
    if !kind.supports(route) {
        return Err(Error::InvalidArgument(format!(
            "the hs route is available only for mwc, wc and core-ep, not {}",
            kind.name()
        )));
    }
    let mut warnings = Vec::new();
    let matrix = match route {
        Route::Definitional => by_definition(a, kind, tol)?,
        Route::HartwigSpindelbock => match kind {
            InverseKind::MWeakCore(m) => hs::m_weak_core(a, m, tol)?,
            InverseKind::Wc => hs::wc(a, tol)?,
            _ => hs::core_ep_inverse(a, tol)?,
        },
        Route::CoreEpCanonical => {
            let c = Canonical::new(core_ep(a, tol)?, tol)?;
            let t = &c.decomposition.t_block;
            if t.rows() > 0 {
                let cond = t.frobenius() * c.t_inverse().frobenius();
                if cond > T_CONDITION_WARNING {
                    warnings.push(format!(
                        "T block is near-singular (condition estimate {cond:.3e}); result may be inaccurate"
                    ));
                }
            }
            by_canonical(&c, kind, tol)?
        }
    };
    Ok(Computed { matrix, warnings })
}

fn by_definition(a: &ComplexMatrix, kind: InverseKind, tol: &Tolerance) -> Result<ComplexMatrix> {
    let d = Definitional::new(a, tol)?;
    match kind {
        InverseKind::MoorePenrose => d.moore_penrose(),
        InverseKind::Group => {
            require_index_le_1(d.index(), GROUP_MSG)?;
            d.drazin()
        }
        InverseKind::Drazin => d.drazin(),
        InverseKind::Core => {
            require_index_le_1(d.index(), CORE_MSG)?;
            d.core()
        }
        InverseKind::CoreEp => d.core_ep(),
        InverseKind::Dmp => d.dmp(),
        InverseKind::Wg => d.wg(),
        InverseKind::MWeakGroup(m) => d.m_weak_group(m),
        InverseKind::Wc => d.wc(),
        InverseKind::MWeakCore(m) => d.m_weak_core(m),
    }
}

fn by_canonical(c: &Canonical, kind: InverseKind, tol: &Tolerance) -> Result<ComplexMatrix> {
    match kind {
        InverseKind::MoorePenrose => crate::decomp::pinv_power_blockwise(&c.decomposition, 1, tol),
        InverseKind::Group => {
            require_index_le_1(c.index(), GROUP_MSG)?;
            c.drazin()
        }
        InverseKind::Drazin => c.drazin(),
        InverseKind::Core => {
            require_index_le_1(c.index(), CORE_MSG)?;
            Ok(c.core_ep())
        }
        InverseKind::CoreEp => Ok(c.core_ep()),
        InverseKind::Dmp => c.dmp(),
        InverseKind::Wg => Ok(c.wg()),
        InverseKind::MWeakGroup(m) => c.m_weak_group(m),
        InverseKind::Wc => c.wc(),
        InverseKind::MWeakCore(m) => c.m_weak_core(m),
    }
}

fn canonical(a: &ComplexMatrix, tol: &Tolerance) -> Result<Canonical> {
    Canonical::new(core_ep(a, tol)?, tol)
}

pub fn moore_penrose(a: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    compute(a, InverseKind::MoorePenrose, tol)
}

pub fn drazin(a: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    canonical(a, tol)?.drazin()
}

pub fn group_inverse(a: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    require_index_le_1(matrix_index(a, tol)?, GROUP_MSG)?;
    drazin(a, tol)
}

pub fn core_ep_inverse(a: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    Ok(canonical(a, tol)?.core_ep())
}

/// `A^# A A†`.
pub fn core_inverse(a: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let g = group_inverse(a, tol).map_err(|e| match e {
        Error::Precondition(_) => Error::Precondition(CORE_MSG.into()),
        other => other,
    })?;
    Ok(&(&g * a) * &moore_penrose(a, tol)?)
}

/// `A^d A A†`.
pub fn dmp_inverse(a: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    canonical(a, tol)?.dmp()
}

pub fn wg_inverse(a: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    Ok(canonical(a, tol)?.wg())
}

pub fn m_weak_group(a: &ComplexMatrix, m: usize, tol: &Tolerance) -> Result<ComplexMatrix> {
    compute(a, InverseKind::MWeakGroup(m), tol)
}

pub fn wc_inverse(a: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    canonical(a, tol)?.wc()
}

pub fn m_weak_core(a: &ComplexMatrix, m: usize, tol: &Tolerance, route: Route) -> Result<ComplexMatrix> {
    compute_by(a, InverseKind::MWeakCore(m), route, tol)
}
