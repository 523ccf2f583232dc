use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("site {site} out of range for a {n}-spin system")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("unsupported spin count {0} (expected 1..={max})", max = crate::spinops::MAX_SPINS)]
    InvalidSpinCount(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian (max |A - A^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid spin system: {0}")]
    InvalidSystem(String),

    #[error("invalid value for `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("imaginary residue {residue:e} exceeds tolerance {tolerance:e} in {context}")]
    ImaginaryResidue {
        context: &'static str,
        residue: f64,
        tolerance: f64,
    },

    #[error("numeric residue in {context}: {detail}")]
    NumericResidue { context: &'static str, detail: String },

    #[error("failed to write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// True for failures raised by residue checks inside the numeric
    /// pipeline, as opposed to bad inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::ImaginaryResidue { .. } | Error::NumericResidue { .. })
    }
}
