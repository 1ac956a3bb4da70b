use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input `{field}`: {reason}")]
    InvalidInput { field: String, reason: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("distinguished vector h is zero")]
    ZeroVector,

    #[error("gram matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("matrices do not commute: max commutator norm {defect:e} exceeds {tol:e}")]
    NonCommuting { defect: f64, tol: f64 },

    #[error("requested degree {requested} exceeds available degree {available}")]
    DegreeOverflow { requested: usize, available: usize },

    #[error("degree {degree} too small, need at least {needed}")]
    DegreeTooSmall { degree: usize, needed: usize },

    #[error("operator is not positive: eigenvalue {min_eigenvalue:e} below tolerance")]
    NotPositive { min_eigenvalue: f64 },

    #[error("eigenpolynomial basis has rank {rank} but the space has dimension {dim}; h is not cyclic or the degree is too small")]
    IncompleteBasis { rank: usize, dim: usize },

    #[error("could not separate joint eigenvalues after {attempts} attempts")]
    AmbiguousSpectrum { attempts: usize },

    #[error("tuple is not a Jordan tuple (self-adjointness defect {defect:e})")]
    NotJordanInput { defect: f64 },

    #[error("quotient space is empty: every Gram eigenvalue is below the null threshold")]
    EmptyQuotient,

    #[error("integer overflow computing {0}")]
    Overflow(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
