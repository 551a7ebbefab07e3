use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("matrix is singular (rank {rank} < {size})")]
    Singular { rank: usize, size: usize },
    #[error("window width {width} does not match the degree span {span} of the modulus")]
    WidthMismatch { width: i64, span: i64 },
    #[error("modulus has non-unit extreme coefficients ({low}, {high})")]
    NonUnitExtremes { low: String, high: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("certificate failure: {0}")]
    CertificateFailure(String),
    #[error("weights sum to {sum}, not zero (canonical class has nonzero weight)")]
    NotCalabiYau { sum: i64 },
    #[error("no wall: weights must include both a positive and a negative entry")]
    NoWall,
    #[error("internal invariant violation: {0}")]
    InternalInvariantViolation(String),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    /// Variant name, stable across releases; used in JSON output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Shape(_) => "ShapeError",
            Error::Singular { .. } => "Singular",
            Error::WidthMismatch { .. } => "WidthMismatch",
            Error::NonUnitExtremes { .. } => "NonUnitExtremes",
            Error::InvalidInput(_) => "InvalidInput",
            Error::CertificateFailure(_) => "CertificateFailure",
            Error::NotCalabiYau { .. } => "NotCalabiYau",
            Error::NoWall => "NoWall",
            Error::InternalInvariantViolation(_) => "InternalInvariantViolation",
        }
    }

    /// True for errors that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::CertificateFailure(_) | Error::InternalInvariantViolation(_)
        )
    }
}
