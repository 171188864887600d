use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("entry count {len} does not match shape {rows}x{cols}")]
    BadLength { rows: usize, cols: usize, len: usize },

    #[error("matrix entries must be finite (found {0} at the offending position)")]
    NonFinite(String),

    #[error("{algorithm} did not converge after {iterations} iterations")]
    NoConvergence {
        algorithm: &'static str,
        iterations: usize,
    },

    #[error("matrix is singular to working tolerance (pivot magnitude {pivot:e})")]
    Singular { pivot: f64 },

    /// A decomposition produced results that disagree with an independent
    /// rank computation; the input is too ill-conditioned for the tolerance.
    #[error("numerical inconsistency: {0}")]
    Inconsistent(String),

    /// A mathematical precondition of the requested object does not hold.
    #[error("{0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors that express a violated mathematical precondition
    /// rather than a numerical breakdown.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::Precondition(_)
                | Error::InvalidArgument(_)
                | Error::NotSquare { .. }
                | Error::DimensionMismatch { .. }
        )
    }
}
