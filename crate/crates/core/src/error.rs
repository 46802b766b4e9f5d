use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid dimensions {0:?}: every mode must be at least 1")]
    InvalidDims((usize, usize, usize)),

    #[error("non-finite entry at linear index {0}")]
    NonFinite(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("imaginary residue {residue:.3e} exceeds tolerance {tolerance:.3e} after inverse DFT")]
    ImagResidueTooLarge { residue: f64, tolerance: f64 },

    #[error("SVD of spectral slice {slice} did not converge")]
    SvdNonConvergence { slice: usize },

    #[error("weight tensor rejected: {0}")]
    InvalidWeights(String),

    #[error("metric undefined: {0}")]
    MetricUndefined(String),

    #[error("tensor file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Numerical failures as opposed to malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ImagResidueTooLarge { .. } | Error::SvdNonConvergence { .. }
        )
    }
}
