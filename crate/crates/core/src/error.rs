use thiserror::Error;

/// Errors raised by the bound computations and input parsers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A Bernoulli probability was outside `[0, 1]` or not finite.
    #[error("probability at index {index} is {value}, expected a finite value in [0, 1]")]
    InvalidProbability { index: usize, value: f64 },

    /// The instance has no probabilities where at least one is required.
    #[error("instance is empty")]
    EmptyInstance,

    /// A scalar parameter violated its domain.
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The instance exceeds the size limit of an exact or brute-force routine.
    #[error("instance of size {n} exceeds the limit of {limit}")]
    InstanceTooLarge { n: usize, limit: usize },

    /// `alpha2 > lambda + 3/2`, outside the feasible set of the K1 supremum.
    #[error("alpha2 = {alpha2} violates alpha2 <= lambda + 3/2 = {bound}")]
    Infeasible { alpha2: f64, bound: f64 },

    /// The Stein operator vanished on the scanned range, so the quotient is undefined.
    #[error("degenerate test function: sup |lambda f(k+1) - k f(k)| is zero")]
    DegenerateTestFunction,

    /// Malformed textual input (probability lists, files, config, reports).
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

pub(crate) fn check_nonnegative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}
