//! Chen–Stein building blocks, evaluated exactly on small instances.
//!
//! For any bounded `f`, `E[lambda f(Z+1) - Z f(Z)] = 0` when `Z ~ Po(lambda)`,
//! while for the Bernoulli sum `W`
//! `E[lambda f(W+1) - W f(W)] = sum_j p_j^2 E[f(V_j+2) - f(V_j+1)]` with
//! `V_j = W - X_j`. Comparing the two expectations gives
//! `d_TV >= sum_j p_j^2 E[f(V_j+2) - f(V_j+1)] / (2 sup_k |lambda f(k+1) - k f(k)|)`.

use serde::{Deserialize, Serialize};

use crate::distributions::{leave_one_out_pmf, poisson_binomial_pmf, poisson_pmf, ProbVector};
use crate::error::{check_positive, Error, Result};

/// Largest instance handled by the brute-force Stein routines.
pub const STEIN_LIMIT: usize = 20;

/// Parameters of `f(k) = (k - alpha1) exp(-(k - alpha2)^2 / (theta lambda))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteinParams {
    alpha1: f64,
    alpha2: f64,
    theta: f64,
    lambda: f64,
}

impl SteinParams {
    pub fn new(alpha1: f64, alpha2: f64, theta: f64, lambda: f64) -> Result<Self> {
        check_positive("theta", theta)?;
        check_positive("lambda", lambda)?;
        for (name, v) in [("alpha1", alpha1), ("alpha2", alpha2)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must be finite",
                });
            }
        }
        Ok(Self {
            alpha1,
            alpha2,
            theta,
            lambda,
        })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Same test function, different Poisson mean.
    pub fn with_lambda(self, lambda: f64) -> Result<Self> {
        Self::new(self.alpha1, self.alpha2, self.theta, lambda)
    }

    pub fn f(&self, k: u64) -> f64 {
        f_eval(self, k)
    }

    /// `lambda f(k+1) - k f(k)`.
    pub fn stein_operator(&self, k: u64) -> f64 {
        self.lambda * self.f(k + 1) - k as f64 * self.f(k)
    }

    /// A scan limit past which `|lambda f(k+1) - k f(k)|` is negligible:
    /// the Gaussian factor has decayed below `1e-16` relative to its peak.
    pub fn default_cutoff(&self) -> u64 {
        let centre = self.alpha2.max(self.lambda).max(0.0);
        let width = (self.theta * self.lambda * (1e16f64).ln()).sqrt();
        (centre + width).ceil() as u64 + 50
    }
}

/// `f(k) = (k - alpha1) exp(-(k - alpha2)^2 / (theta lambda))`.
pub fn f_eval(params: &SteinParams, k: u64) -> f64 {
    let k = k as f64;
    let d = k - params.alpha2;
    (k - params.alpha1) * (-d * d / (params.theta * params.lambda)).exp()
}

/// `|E[lambda f(Z+1) - Z f(Z)]|` for `Z ~ Po(lambda)`, summed over `k <= trunc_k`,
/// for an arbitrary test function.
pub fn stein_identity_residual_with<F>(lambda: f64, f: F, trunc_k: u64) -> Result<f64>
where
    F: Fn(u64) -> f64,
{
    let z = poisson_pmf(lambda, trunc_k as usize)?;
    Ok(z.expect(|k| {
        let k = k as u64;
        lambda * f(k + 1) - k as f64 * f(k)
    })
    .abs())
}

/// Residual of the Poisson Stein identity for the Gaussian-tilted `f`.
pub fn stein_identity_residual(params: &SteinParams, trunc_k: u64) -> Result<f64> {
    stein_identity_residual_with(params.lambda, |k| params.f(k), trunc_k)
}

fn check_size(p: &ProbVector) -> Result<()> {
    if p.len() > STEIN_LIMIT {
        return Err(Error::InstanceTooLarge {
            n: p.len(),
            limit: STEIN_LIMIT,
        });
    }
    Ok(())
}

/// `sum_j p_j^2 E[f(V_j+2) - f(V_j+1)]` via the exact pmf of each `V_j`.
fn transfer_numerator(p: &ProbVector, params: &SteinParams) -> f64 {
    let probs = p.probs();
    (0..probs.len())
        .map(|j| {
            let v = leave_one_out_pmf(probs, j);
            let e: f64 = v
                .iter()
                .enumerate()
                .map(|(k, &w)| w * (params.f(k as u64 + 2) - params.f(k as u64 + 1)))
                .sum();
            probs[j] * probs[j] * e
        })
        .sum()
}

/// Both sides of the transfer identity
/// `E[lambda f(W+1) - W f(W)] = sum_j p_j^2 E[f(V_j+2) - f(V_j+1)]`.
///
/// The operator uses the instance's own mean; `params.lambda` only sets
/// the Gaussian width `theta lambda`.
pub fn stein_transfer_both_sides(p: &ProbVector, params: &SteinParams) -> Result<(f64, f64)> {
    check_size(p)?;
    let lambda = p.lambda();
    let w = poisson_binomial_pmf(p);
    let lhs = w.expect(|k| {
        let k = k as u64;
        lambda * params.f(k + 1) - k as f64 * params.f(k)
    });
    Ok((lhs, transfer_numerator(p, params)))
}

/// `sup_{k <= trunc_k} |lambda f(k+1) - k f(k)|`.
pub fn stein_operator_sup(params: &SteinParams, trunc_k: u64) -> f64 {
    (0..=trunc_k)
        .map(|k| params.stein_operator(k).abs())
        .fold(0.0, f64::max)
}

/// The computable right-hand side of the master inequality
/// `d_TV >= sum_j p_j^2 E[f(V_j+2) - f(V_j+1)] / (2 sup_k |lambda f(k+1) - k f(k)|)`.
///
/// `params.lambda` must equal the instance mean for the inequality to apply.
pub fn chen_stein_quotient(p: &ProbVector, params: &SteinParams, trunc_k: u64) -> Result<f64> {
    check_size(p)?;
    let sup = stein_operator_sup(params, trunc_k);
    if sup.is_nan() || sup <= 0.0 {
        return Err(Error::DegenerateTestFunction);
    }
    Ok(transfer_numerator(p, params) / (2.0 * sup))
}
