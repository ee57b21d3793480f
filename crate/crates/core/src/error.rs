use thiserror::Error;

/// Errors raised by the samplers, estimators and graph builders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("sample must contain at least one value")]
    EmptySample,
    #[error("`{name}` = {value} is outside its admissible range")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("{what}: size {size} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("root finder did not converge in bracket [{lo}, {hi}]")]
    NoConvergence { lo: f64, hi: f64 },
    #[error("mean clique size n*tail(sqrt(a_n)) = {sigma2} is below 1; not sub-critical")]
    NotSubCritical { sigma2: f64 },
    #[error("no asymptotic formula is available for this parameter region: {0}")]
    UnsupportedRegion(&'static str),
    #[error("graphon has zero L1 norm")]
    ZeroGraphon,
    #[error("graphon sides differ: {0} vs {1}")]
    SideMismatch(f64, f64),
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}
