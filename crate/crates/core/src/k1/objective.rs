use serde::{Deserialize, Serialize};

use super::cubic::{x_extrema, CubicCoeffs};
use crate::error::{check_positive, Error, Result};

/// Parameters `(alpha1, alpha2, theta)` of the test function
/// `f(k) = (k - alpha1) exp(-(k - alpha2)^2 / (theta lambda))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct K1Params {
    pub alpha1: f64,
    pub alpha2: f64,
    pub theta: f64,
}

impl K1Params {
    pub fn new(alpha1: f64, alpha2: f64, theta: f64) -> Self {
        Self {
            alpha1,
            alpha2,
            theta,
        }
    }
}

/// Upper end of the feasible range of `alpha2`.
pub fn alpha2_bound(lambda: f64) -> f64 {
    lambda + 1.5
}

fn check_inputs(lambda: f64, alpha1: f64, alpha2: f64, theta: f64) -> Result<()> {
    check_positive("lambda", lambda)?;
    check_positive("theta", theta)?;
    for (name, v) in [("alpha1", alpha1), ("alpha2", alpha2)] {
        if !v.is_finite() {
            return Err(Error::InvalidParameter {
                name,
                value: v,
                reason: "must be finite",
            });
        }
    }
    Ok(())
}

/// Relative loss `h` in the lower bound on `sum p_j^2 E[f(V_j+2) - f(V_j+1)]`.
pub fn h_lambda(lambda: f64, alpha1: f64, alpha2: f64, theta: f64) -> Result<f64> {
    check_inputs(lambda, alpha1, alpha2, theta)?;
    let tl = theta * lambda;
    // (a + 1)^3 - a^3 with a = 1 - alpha2 + lambda, expanded to avoid cancellation
    let a = 1.0 - alpha2 + lambda;
    let cube_diff = 3.0 * a * a + 3.0 * a + 1.0;
    let pos = (1.0 - alpha2).max(0.0);
    let cross = (alpha1 - alpha2).abs()
        * (2.0 * lambda + (3.0 - 2.0 * alpha2).abs())
        * (-pos * pos / tl).exp();
    Ok((3.0 * lambda + cube_diff + cross) / tl)
}

/// Upper bound `g` on `sup_k |lambda f(k+1) - k f(k)|`.
pub fn g_lambda(lambda: f64, alpha1: f64, alpha2: f64, theta: f64) -> Result<f64> {
    check_inputs(lambda, alpha1, alpha2, theta)?;
    let tl = theta * lambda;
    let slope = (2.0 / (tl * std::f64::consts::E)).sqrt() * (alpha1 - alpha2).abs();
    let x = x_extrema(&CubicCoeffs::from_params(lambda, alpha1, alpha2, theta)?);
    let upper = ((1.0 + slope) * lambda + x.max).abs();
    let lower = ((2.0 * (-1.5f64).exp() + slope) * lambda - x.min).abs();
    Ok(upper.max(lower))
}

/// `(1 - h) / (2 g)`, the lower-bound coefficient for one feasible parameter
/// triple. Negative values are legal and mean the triple is uninformative.
pub fn k1_objective(lambda: f64, alpha1: f64, alpha2: f64, theta: f64) -> Result<f64> {
    let bound = alpha2_bound(lambda);
    if alpha2 > bound {
        return Err(Error::Infeasible { alpha2, bound });
    }
    let h = h_lambda(lambda, alpha1, alpha2, theta)?;
    let g = g_lambda(lambda, alpha1, alpha2, theta)?;
    Ok((1.0 - h) / (2.0 * g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_bounds::{corollary_k1_tilde, theta_star};
    use std::f64::consts::E;

    #[test]
    fn h_reduces_on_the_diagonal() {
        for &(lambda, theta) in &[(0.3, 2.0), (1.0, 10.0), (7.0, 4.5), (150.0, 6.6)] {
            let h = h_lambda(lambda, lambda, lambda, theta).unwrap();
            let want = (3.0 * lambda + 7.0) / (theta * lambda);
            assert!((h - want).abs() <= 1e-14 * want.max(1.0));
        }
        assert!((h_lambda(1.0, 1.0, 1.0, 10.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn h_vanishes_for_wide_gaussian() {
        let small = h_lambda(2.0, 0.5, 1.0, 1e9).unwrap();
        assert!(small > 0.0 && small < 1e-7);
    }

    #[test]
    fn h_matches_unexpanded_cubes() {
        let (lambda, a1, a2, theta): (f64, f64, f64, f64) = (2.5, 1.7, -0.4, 3.3);
        let tl = theta * lambda;
        let direct = (3.0 * lambda + (2.0 - a2 + lambda).powi(3) - (1.0 - a2 + lambda).powi(3)
            + (a1 - a2).abs() * (2.0 * lambda + (3.0 - 2.0 * a2).abs())
                * (-(1.0 - a2).powi(2) / tl).exp())
            / tl;
        assert!((h_lambda(lambda, a1, a2, theta).unwrap() - direct).abs() < 1e-13);
    }

    #[test]
    fn g_reduces_on_the_diagonal() {
        for &(lambda, theta) in &[(0.3, 2.0), (1.0, 1.0), (1.0, 20.0), (40.0, 6.6)] {
            let g = g_lambda(lambda, lambda, lambda, theta).unwrap();
            let want = lambda * f64::max(1.0, 2.0 * (-1.5f64).exp() + theta / E);
            assert!((g - want).abs() <= 1e-13 * want);
        }
        assert_eq!(g_lambda(1.0, 1.0, 1.0, 1.0).unwrap(), 1.0);
        let g = g_lambda(1.0, 1.0, 1.0, 20.0).unwrap();
        assert!((g - (2.0 * (-1.5f64).exp() + 20.0 / E)).abs() < 1e-14);
        assert!((g - 7.803_849).abs() < 1e-6);
    }

    #[test]
    fn objective_on_diagonal_is_closed_form() {
        for &lambda in &[0.1, 1.0, 10.0] {
            let t = theta_star(lambda).unwrap();
            let k = k1_objective(lambda, lambda, lambda, t).unwrap();
            assert!((k - corollary_k1_tilde(lambda).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn objective_diverges_for_narrow_gaussian() {
        let k = k1_objective(1.0, 1.0, 1.0, 1e-9).unwrap();
        assert!(k < -1e3);
    }

    #[test]
    fn infeasible_alpha2_rejected() {
        assert!(matches!(
            k1_objective(1.0, 1.0, 3.0, 5.0),
            Err(Error::Infeasible { .. })
        ));
        assert!(k1_objective(1.0, 1.0, 2.5, 5.0).is_ok());
        assert!(h_lambda(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(g_lambda(1.0, 1.0, 1.0, -1.0).is_err());
    }
}
