use thiserror::Error;

/// Failures raised by the numerical routes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("lowest weight e0 = {e0} is below 1/2; the discrete series needs e0 >= 1/2")]
    LowestWeightTooSmall { e0: f64 },

    #[error("radial box too small: level {level} has relative weight {weight:.3e} on the outer 5% of the grid")]
    BoxTooSmall { level: usize, weight: f64 },

    #[error("level sum truncated too early: last 10% of terms contribute {tail:.3e} to Im log D")]
    TruncationTooShort { tail: f64 },

    #[error("phase sequence is not monotone in omega (jump {jump:.3e}); epsilon/omega too small to smooth the staircase")]
    StaircaseNotSmoothed { jump: f64 },

    #[error("asymptotic fit residual {residual:.3e} exceeds {threshold:.1e}; r_max too small")]
    FitResidual { residual: f64, threshold: f64 },

    #[error("ODE integration failed at r = {r}: {reason}")]
    Integration { r: f64, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
