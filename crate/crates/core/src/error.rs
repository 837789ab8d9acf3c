use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("symmetric eigen-iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not symplectic (defect {defect:e})")]
    NotSymplectic { defect: f64 },

    #[error("automorphy factor CZ+D is numerically singular")]
    SingularFactor,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix entries are not integral (max distance to an integer {distance:e})")]
    NonIntegral { distance: f64 },

    #[error("reduction did not terminate within {steps} steps")]
    NonTermination { steps: usize },

    #[error("unsupported representation: {0}")]
    UnsupportedWeight(String),

    #[error("vectors belong to different representations")]
    MismatchedRep,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("tail series does not converge for minimal eigenvalue {0:e}")]
    Divergence(f64),

    #[error("growth exponent r = {r} is below n*lambda_1/2 = {minimum}")]
    InvalidExponent { r: f64, minimum: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("form file: {0}")]
    FormFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by malformed input rather than numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::FormFile(_)
                | Error::InvalidInput(_)
                | Error::Json(_)
                | Error::Io(_)
                | Error::NotSymmetric { .. }
                | Error::NotSymplectic { .. }
                | Error::NonIntegral { .. }
                | Error::UnsupportedWeight(_)
                | Error::DimensionMismatch { .. }
                | Error::InvalidExponent { .. }
        )
    }
}
