//! Closed-form bound coefficients.
//!
//! Every absolute bound here has the form `coefficient(lambda) * sum p_i^2`.
//! The upper bound of Barbour and Hall and the classical `1/32` lower bound
//! are joined by the closed-form lower coefficient obtained from the
//! Gaussian-tilted test function at `alpha1 = alpha2 = lambda` with the
//! optimal width `theta*`.

use std::f64::consts::{E, PI};

use crate::distributions::ProbVector;
use crate::error::{check_nonnegative, check_positive, Result};

/// Below this mean the coefficients switch to their `lambda -> 0` limits.
pub const LAMBDA_EPS: f64 = 1e-12;

/// `2 e^{-1/2}`.
pub(crate) fn two_exp_neg_half() -> f64 {
    2.0 * (-0.5f64).exp()
}

/// Le Cam's upper bound `sum p_i^2`.
pub fn le_cam_upper(p: &ProbVector) -> f64 {
    p.sum_p2()
}

/// `(1 - e^{-lambda}) / lambda`, with its limit `1` at `lambda -> 0`.
pub fn bh_upper_coeff(lambda: f64) -> Result<f64> {
    check_nonnegative("lambda", lambda)?;
    if lambda < LAMBDA_EPS {
        return Ok(1.0);
    }
    Ok(-(-lambda).exp_m1() / lambda)
}

/// Barbour–Hall upper bound `((1 - e^{-lambda}) / lambda) sum p_i^2`.
pub fn barbour_hall_upper(lambda: f64, sum_p2: f64) -> Result<f64> {
    check_nonnegative("sum_p2", sum_p2)?;
    Ok(bh_upper_coeff(lambda)? * sum_p2)
}

/// `(1/32) min(1, 1/lambda)`.
pub fn bh_lower_coeff(lambda: f64) -> Result<f64> {
    check_nonnegative("lambda", lambda)?;
    Ok(if lambda <= 1.0 { 1.0 / 32.0 } else { 1.0 / (32.0 * lambda) })
}

/// Barbour–Hall lower bound `(1/32) min(1, 1/lambda) sum p_i^2`.
pub fn barbour_hall_lower(lambda: f64, sum_p2: f64) -> Result<f64> {
    check_nonnegative("sum_p2", sum_p2)?;
    Ok(bh_lower_coeff(lambda)? * sum_p2)
}

/// Width of the Gaussian factor that maximises the closed-form coefficient:
///
/// `theta* = 3 + 7/lambda + sqrt((3 lambda + 7)((3 + 2 e^{-1/2}) lambda + 7)) / lambda`.
///
/// This is the positive root of `lambda t^2 - 2(3 lambda + 7) t - 2(3 lambda + 7) e^{-1/2} = 0`.
pub fn theta_star(lambda: f64) -> Result<f64> {
    check_positive("lambda", lambda)?;
    let a = 3.0 * lambda + 7.0;
    let b = (3.0 + two_exp_neg_half()) * lambda + 7.0;
    Ok(3.0 + 7.0 / lambda + (a * b).sqrt() / lambda)
}

/// Closed-form lower coefficient
/// `K~1(lambda) = (e / 2 lambda) (1 - (3 + 7/lambda) / theta*) / (theta* + 2 e^{-1/2})`.
pub fn corollary_k1_tilde(lambda: f64) -> Result<f64> {
    let theta = theta_star(lambda)?;
    Ok(k1_tilde_at(lambda, theta))
}

/// The closed-form coefficient's objective as a function of `theta`; valid
/// as a lower bound for `theta >= e - 2/sqrt(e)`.
pub fn k1_tilde_at(lambda: f64, theta: f64) -> f64 {
    E / (2.0 * lambda) * (1.0 - (3.0 + 7.0 / lambda) / theta) / (theta + two_exp_neg_half())
}

/// Deheuvels–Pfeifer asymptotic `sum p_i^2 / (sqrt(2 pi e) lambda)`.
///
/// Exact only in the limit `lambda -> inf` with `max p_i -> 0`.
pub fn asymptotic_tv(lambda: f64, sum_p2: f64) -> Result<f64> {
    check_positive("lambda", lambda)?;
    check_nonnegative("sum_p2", sum_p2)?;
    Ok(sum_p2 / ((2.0 * PI * E).sqrt() * lambda))
}

/// Printed reference values, kept at their published precision.
pub const REFERENCE_CONSTANTS: &[(&str, f64)] = &[
    ("ratio_inf", 10.539),
    ("ratio_zero", 20.601),
    ("improvement_inf", 3.037),
    ("improvement_zero", 1.553),
    ("bh_ratio", 32.0),
    ("claimed_const", 1.0 / 14.0),
];

/// Looks up one of [`REFERENCE_CONSTANTS`] by name.
pub fn reference_constant(name: &str) -> Option<f64> {
    REFERENCE_CONSTANTS
        .iter()
        .find(|(k, _)| *k == name)
        .map(|&(_, v)| v)
}

/// `lim_{lambda -> inf} bh_upper_coeff / K~1 = (6/e)(1 + sqrt(1 + (2/3) e^{-1/2}))^2`.
pub fn ratio_limit_inf() -> f64 {
    let s = 1.0 + (1.0 + 2.0 / 3.0 * (-0.5f64).exp()).sqrt();
    6.0 / E * s * s
}

/// `lim_{lambda -> 0} bh_upper_coeff / K~1 = 56/e`.
pub fn ratio_limit_zero() -> f64 {
    56.0 / E
}

/// `lim_{lambda -> inf} theta* = 3 + sqrt(3 (3 + 2 e^{-1/2}))`.
pub fn theta_star_limit_inf() -> f64 {
    3.0 + (3.0 * (3.0 + two_exp_neg_half())).sqrt()
}
