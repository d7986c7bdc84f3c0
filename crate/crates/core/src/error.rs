use thiserror::Error;

/// Errors raised by the core simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("effective temperature {0} is not positive; gas packet width too small")]
    NonPositiveEffectiveTemperature(f64),

    #[error("short-time weight R*t = {0} lies outside [0, 1]")]
    MixtureWeightOutOfRange(f64),

    #[error("quadrature did not converge: estimated error {error:e} exceeds tolerance {tolerance:e}")]
    QuadratureNonConvergence { error: f64, tolerance: f64 },

    #[error("reference Wigner value {0:e} at the antinode is below the division floor")]
    DegenerateAntinode(f64),

    #[error("at least {min} samples are required, got {got}")]
    TooFewSamples { min: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require(ok: bool, name: &'static str, reason: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: reason() })
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<()> {
    require(value.is_finite() && value > 0.0, name, || format!("must be finite and strictly positive, got {value}"))
}

pub(crate) fn finite(name: &'static str, value: f64) -> Result<()> {
    require(value.is_finite(), name, || format!("must be finite, got {value}"))
}
