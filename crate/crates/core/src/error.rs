use thiserror::Error;

/// Errors raised by the matrix toolkit, the generators and the claim registry.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("matrix is singular or too ill-conditioned to invert (condition number {condition:.3e})")]
    SingularMatrix { condition: f64 },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not accretive (smallest eigenvalue of the real part {lambda_min:.3e})")]
    NotAccretive { lambda_min: f64 },

    #[error("eigenvalue {re:.3e}{im:+.3e}i lies on the branch cut (-inf, 0]")]
    SpectrumOnCut { re: f64, im: f64 },

    #[error("eigenbasis condition number {condition:.3e} exceeds the cap")]
    IllConditionedEigenbasis { condition: f64 },

    #[error("matrix is not sectorial: real part is not positive definite (lambda_min {lambda_min:.3e})")]
    NotSectorial { lambda_min: f64 },

    #[error("value out of range: {0}")]
    Range(String),

    #[error("instance generation failed after {rounds} rounds: {reason}")]
    GenerationFailed { rounds: usize, reason: String },

    #[error("hypothesis violated for {claim}: {reason}")]
    HypothesisViolation { claim: String, reason: String },

    #[error("unknown claim id {0}")]
    UnknownClaim(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Errors after which the campaign harness draws a fresh instance instead
    /// of recording a failure.
    pub fn is_regenerable(&self) -> bool {
        matches!(
            self,
            Error::IllConditionedEigenbasis { .. }
                | Error::SingularMatrix { .. }
                | Error::GenerationFailed { .. }
                | Error::HypothesisViolation { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
