use thiserror::Error;

/// Errors raised by state construction, validation and the fidelity machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("wrong shape: {0}")]
    WrongShape(String),

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("covariance matrix is not bona fide: symplectic eigenvalue #{index} = {nu} < 1/2")]
    NotBonaFide { index: usize, nu: f64 },

    #[error("invalid covariance matrix: {0}")]
    InvalidCm(String),

    #[error("matrix is not symplectic (deviation {deviation:e})")]
    NotSymplectic { deviation: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("negative discriminant {0:e} in symplectic eigenvalue formula")]
    NegativeDiscriminant(f64),

    #[error("degenerate local block (det = {det:e})")]
    DegenerateBlock { det: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("mode index {index} out of range for {n_modes} modes")]
    IndexOutOfRange { index: usize, n_modes: usize },

    #[error("squeezing parameter must be non-negative, got {0}")]
    NegativeSqueezing(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("normalization factor g = {0} is not above 1/2")]
    GOutOfRange(f64),

    #[error("phase-space grid too small: integral of W = {integral}")]
    GridTooSmall { integral: f64 },

    #[error("probability of the complementary outcome is not positive: {0}")]
    NegativeProbability(f64),

    #[error("malformed state file: {0}")]
    Format(String),
}

impl Error {
    /// Short machine-readable tag for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::WrongShape(_) => "WrongShape",
            Error::NotSymmetric { .. } => "NotSymmetric",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::NotBonaFide { .. } => "NotBonaFide",
            Error::InvalidCm(_) => "InvalidCM",
            Error::NotSymplectic { .. } => "NotSymplectic",
            Error::NumericalFailure(_) => "NumericalFailure",
            Error::NegativeDiscriminant(_) => "NegativeDiscriminant",
            Error::DegenerateBlock { .. } => "DegenerateBlock",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::NegativeSqueezing(_) => "NegativeSqueezing",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::InvalidInput(_) => "InvalidInput",
            Error::GOutOfRange(_) => "GOutOfRange",
            Error::GridTooSmall { .. } => "GridTooSmall",
            Error::NegativeProbability(_) => "NegativeProbability",
            Error::Format(_) => "Format",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
