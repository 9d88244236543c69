use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown generator index {index} (presentation has {count} generators)")]
    UnknownGenerator { index: i64, count: usize },

    #[error("unknown generator name `{0}`")]
    UnknownGeneratorName(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("coset enumeration exceeded {limit} cosets")]
    CosetOverflow { limit: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e} below -{threshold:e}")]
    NotPositiveSemidefinite { eigenvalue: f64, threshold: f64 },

    #[error("spectral gap unresolved: gap {gap:e} does not exceed 10x threshold {threshold:e}")]
    UnresolvedGap { gap: f64, threshold: f64 },

    #[error("eigensolver did not converge: {0}")]
    NonConvergence(String),

    #[error("projection defect {defect:e} exceeds tolerance {tolerance:e}")]
    ProjectionDefect { defect: f64, tolerance: f64 },

    #[error("chain identity d_{degree} * d_{prev} != 0 under representation `{representation}`", prev = degree.wrapping_sub(1))]
    ChainIdentity { degree: usize, representation: String },

    #[error("degree {degree} out of range (complex has top degree {top})")]
    DegreeOutOfRange { degree: usize, top: usize },

    #[error("complex is not declared complete; Euler characteristic needs every degree of K(G,1)")]
    IncompleteComplex,

    #[error("certificate is not verified")]
    UnverifiedCertificate,

    #[error("kernel of {operator} has dimension {spectral} spectrally but {algebraic} by rank")]
    KernelMismatch { operator: String, spectral: usize, algebraic: usize },

    #[error("trace functional unavailable: {0}")]
    TraceUnavailable(String),
}

impl Error {
    /// True for errors caused by malformed input rather than by a computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::UnknownGenerator { .. }
                | Error::UnknownGeneratorName(_)
                | Error::Parse(_)
                | Error::InvalidInput(_)
                | Error::DimensionMismatch(_)
                | Error::DegreeOutOfRange { .. }
                | Error::ChainIdentity { .. }
                | Error::NotSymmetric
                | Error::IncompleteComplex
        )
    }
}
