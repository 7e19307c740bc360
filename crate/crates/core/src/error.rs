use thiserror::Error;

/// Errors raised by the discrete-well library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name}: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("site index {index} outside 0..={max}")]
    SiteOutOfRange { index: i64, max: usize },

    #[error("singular quadrature: |sin| = {value:e} is below {tolerance:e}")]
    SingularQuadrature { value: f64, tolerance: f64 },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("series did not converge within {0} terms")]
    CutoffExceeded(usize),

    #[error("thermal step {0} exceeds the stability bound 1")]
    UnstableStep(f64),

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of a numerical procedure (as opposed to inputs outside the model's domain).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::SingularQuadrature { .. }
                | Error::NotSymmetric(_)
                | Error::CutoffExceeded(_)
                | Error::UnstableStep(_)
                | Error::NoConvergence(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be a positive finite number, got {value}"),
        ))
    }
}
