use thiserror::Error;

/// Errors raised by the thermometry library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThermoError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("temperature must be positive, got {0}")]
    Domain(f64),

    #[error("no friction regime holds with margin {margin}: {violated}")]
    AmbiguousRegime { margin: f64, violated: String },

    #[error("quadrature did not reach tolerance {tolerance:e} (estimated error {error:e} after {intervals} intervals)")]
    NonconvergentQuadrature {
        tolerance: f64,
        error: f64,
        intervals: usize,
    },

    #[error("delta state has no pointwise density")]
    DeltaState,

    #[error("spectral truncation not converged: last mode carries {ratio:e} of the total")]
    TruncationNotConverged { ratio: f64 },

    #[error("grid too narrow: boundary density {density:e} exceeds {threshold:e}")]
    GridTooNarrow { density: f64, threshold: f64 },

    #[error("finite-difference step underflow at T = {temperature}")]
    StepUnderflow { temperature: f64 },

    #[error("Fisher information matrix is singular (det = {det:e})")]
    SingularFim { det: f64 },

    #[error("Fisher information is zero")]
    ZeroInformation,

    #[error("momentum measurement carries no signal when P0 = 0")]
    ZeroSignal,

    #[error("sample mean ratio {ratio} outside (0, 1)")]
    OutOfRange { ratio: f64 },

    #[error("moment map is not monotone: {roots} temperatures reproduce second moment {second_moment}")]
    AmbiguousRoot { second_moment: f64, roots: usize },

    #[error("no temperature reproduces second moment {second_moment} (infimum {infimum})")]
    NoRoot { second_moment: f64, infimum: f64 },
}

impl ThermoError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        ThermoError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of a numerical method (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            ThermoError::NonconvergentQuadrature { .. }
                | ThermoError::TruncationNotConverged { .. }
                | ThermoError::StepUnderflow { .. }
                | ThermoError::SingularFim { .. }
                | ThermoError::ZeroInformation
                | ThermoError::OutOfRange { .. }
                | ThermoError::NoRoot { .. }
                | ThermoError::AmbiguousRoot { .. }
                | ThermoError::GridTooNarrow { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, ThermoError>;
