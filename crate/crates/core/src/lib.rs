//! Generalized inverses of square complex matrices built around the
//! m-weak core inverse.
//!
//! The crate is split into five layers:
//!
//! - [`numkit`]: dense complex linear algebra (SVD, ordered Schur form,
//!   pseudoinverse, rank) with an explicit [`Tolerance`] policy.
//! - [`decomp`]: matrix index, core-EP and Hartwig–Spindelböck
//!   decompositions and the block quantities derived from them.
//! - [`inverses`]: Moore–Penrose, group, Drazin, core, core-EP, DMP, WG,
//!   m-weak group, WC and m-weak core inverses, each available through more
//!   than one computational route.
//! - [`verify`]: executable identity checks, matrix-class predicates and a
//!   generator of random matrices with prescribed index.
//! - [`io`]: CSV and JSON matrix file formats.

pub mod decomp;
pub mod error;
pub mod inverses;
pub mod io;
pub mod numkit;
pub mod verify;

pub use error::{Error, Result};
pub use numkit::{ComplexMatrix, Tolerance, C64};
