//! Seeded invariant suites shared by the command line and the test targets.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_bounds::{
    barbour_hall_upper, bh_upper_coeff, corollary_k1_tilde, le_cam_upper, ratio_limit_inf,
    ratio_limit_zero, theta_star, theta_star_limit_inf,
};
use crate::distributions::{exact_tv_poisson_approx, ProbVector};
use crate::error::{Error, Result};
use crate::k1::{optimize_k1, OptimizerConfig, Variant};
use crate::stein::{
    chen_stein_quotient, stein_identity_residual, stein_transfer_both_sides, SteinParams,
};
use crate::sweep::{sweep, Scale};

pub const SANDWICH_INSTANCES: usize = 200;
pub const SANDWICH_MAX_N: usize = 12;
pub const SANDWICH_SLACK: f64 = 1e-12;
pub const ORDER_SLACK: f64 = 1e-6;
pub const MERGE_FROM: f64 = 20.0;
pub const MERGE_TOL: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Stein,
    Sandwich,
    Ordering,
    Limits,
    All,
}

impl Suite {
    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Stein => "stein",
            Suite::Sandwich => "sandwich",
            Suite::Ordering => "ordering",
            Suite::Limits => "limits",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::Stein, Suite::Sandwich, Suite::Ordering, Suite::Limits, Suite::All]
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("unknown suite `{s}`"),
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {} {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }
}

/// `n` uniform probabilities with `n` uniform on `1..=max_n`.
pub fn random_instance(rng: &mut impl Rng, max_n: usize) -> ProbVector {
    let n = rng.random_range(1..=max_n);
    let probs = (0..n).map(|_| rng.random::<f64>()).collect();
    ProbVector::new(probs).expect("uniform draws lie in [0, 1)")
}

fn random_params(rng: &mut impl Rng, lambda: f64) -> SteinParams {
    let spread = 3.0 + lambda.sqrt();
    let alpha1 = lambda + rng.random_range(-spread..spread);
    let alpha2 = lambda + rng.random_range(-spread..spread);
    let theta = 10f64.powf(rng.random_range(-0.5..2.0));
    SteinParams::new(alpha1, alpha2, theta, lambda).expect("finite positive draws")
}

/// Cutoff covering both the Gaussian factor and the Poisson mass.
fn cutoff(params: &SteinParams) -> u64 {
    let l = params.lambda();
    let poisson = (l + 20.0 * l.sqrt() + 60.0).ceil() as u64;
    params.default_cutoff().max(poisson)
}

/// Poisson identity residual, transfer identity and the quotient-below-TV check.
pub fn stein_suite(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let mut worst = 0.0f64;
    for _ in 0..50 {
        let lambda = 10f64.powf(rng.random_range(-1.0..1.3));
        let params = random_params(&mut rng, lambda);
        let r = stein_identity_residual(&params, cutoff(&params)).unwrap_or(f64::INFINITY);
        worst = worst.max(r);
    }
    checks.push(Check::new(
        "stein.poisson_identity",
        worst < 1e-10,
        format!("50 draws, max residual {worst:e} (< 1e-10)"),
    ));

    let mut worst = 0.0f64;
    for _ in 0..50 {
        let p = random_instance(&mut rng, 10);
        let params = random_params(&mut rng, p.lambda().max(1e-3));
        let gap = stein_transfer_both_sides(&p, &params)
            .map(|(l, r)| (l - r).abs())
            .unwrap_or(f64::INFINITY);
        worst = worst.max(gap);
    }
    checks.push(Check::new(
        "stein.transfer_identity",
        worst < 1e-10,
        format!("50 instances, max |lhs - rhs| {worst:e} (< 1e-10)"),
    ));

    let mut violations = 0;
    let mut min_margin = f64::INFINITY;
    for _ in 0..100 {
        let p = random_instance(&mut rng, 10);
        let params = random_params(&mut rng, p.lambda());
        let tv = exact_tv_poisson_approx(&p).unwrap_or(f64::NAN);
        match chen_stein_quotient(&p, &params, cutoff(&params)) {
            Ok(q) => {
                min_margin = min_margin.min(tv - q);
                if q.is_nan() || tv.is_nan() || q > tv + SANDWICH_SLACK {
                    violations += 1;
                }
            }
            Err(Error::DegenerateTestFunction) => {}
            Err(_) => violations += 1,
        }
    }
    checks.push(Check::new(
        "stein.quotient_below_tv",
        violations == 0,
        format!("100 pairs, {violations} violations, min tv - quotient {min_margin:e}"),
    ));
    checks
}

struct SandwichRow {
    k1_three: f64,
    k1_closed: f64,
    tv: f64,
    bh: f64,
    le_cam: f64,
}

/// Checks `K~1 s <= K1 s <= TV <= BH <= Le Cam` on random instances, `s = sum p^2`.
pub fn sandwich_suite(seed: u64, cfg: &OptimizerConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instances: Vec<ProbVector> = (0..SANDWICH_INSTANCES)
        .map(|_| random_instance(&mut rng, SANDWICH_MAX_N))
        .collect();
    let rows: Vec<Result<SandwichRow>> = instances
        .par_iter()
        .map(|p| {
            let s = p.sum_p2();
            let lambda = p.lambda();
            Ok(SandwichRow {
                k1_three: optimize_k1(lambda, Variant::ThreeParam, cfg)?.k1 * s,
                k1_closed: corollary_k1_tilde(lambda)? * s,
                tv: exact_tv_poisson_approx(p)?,
                bh: barbour_hall_upper(lambda, s)?,
                le_cam: le_cam_upper(p),
            })
        })
        .collect();

    let mut fails = [0usize; 5];
    for row in &rows {
        let Ok(r) = row else {
            fails[4] += 1;
            continue;
        };
        let links = [
            r.k1_closed <= r.k1_three + SANDWICH_SLACK,
            r.k1_three <= r.tv + SANDWICH_SLACK,
            r.tv <= r.bh + SANDWICH_SLACK,
            r.bh <= r.le_cam + SANDWICH_SLACK,
        ];
        for (i, ok) in links.iter().enumerate() {
            if !ok {
                fails[i] += 1;
            }
        }
    }
    let names = [
        "sandwich.closed_below_three",
        "sandwich.three_below_tv",
        "sandwich.tv_below_bh",
        "sandwich.bh_below_le_cam",
        "sandwich.computed",
    ];
    names
        .iter()
        .zip(fails)
        .map(|(name, f)| {
            Check::new(
                *name,
                f == 0,
                format!("{} instances, {f} violations", instances.len()),
            )
        })
        .collect()
}

/// `ratio_three <= ratio_common <= ratio_closed` on a log grid, and the
/// relative gap between three-parameter and closed-form ratios for large means.
pub fn ordering_suite(cfg: &OptimizerConfig) -> Vec<Check> {
    let rows = match sweep(0.01, 100.0, 30, Scale::Log, &Variant::ALL, cfg) {
        Ok(rows) => rows,
        Err(e) => return vec![Check::new("ordering.sweep", false, e.to_string())],
    };
    let mut bad_order = Vec::new();
    let mut worst_gap = 0.0f64;
    let mut worst_gap_at = f64::NAN;
    for r in &rows {
        let (Some(t), Some(c), Some(z)) = (r.ratio_three, r.ratio_common, r.ratio_closed) else {
            bad_order.push(r.lambda);
            continue;
        };
        let ordered = t <= c + ORDER_SLACK && c <= z + ORDER_SLACK && z <= r.ratio_bh + ORDER_SLACK;
        if !ordered || t <= 0.0 {
            bad_order.push(r.lambda);
        }
        if r.lambda >= MERGE_FROM {
            let gap = (z - t) / z;
            if gap > worst_gap {
                worst_gap = gap;
                worst_gap_at = r.lambda;
            }
        }
    }
    vec![
        Check::new(
            "ordering.chain",
            bad_order.is_empty(),
            format!("{} grid points, out of order at {bad_order:?}", rows.len()),
        ),
        Check::new(
            "ordering.merge",
            worst_gap < MERGE_TOL,
            format!("max relative gap {worst_gap:.6} at lambda {worst_gap_at} (< {MERGE_TOL})"),
        ),
    ]
}

fn ratio_closed(lambda: f64) -> f64 {
    bh_upper_coeff(lambda).unwrap_or(f64::NAN) / corollary_k1_tilde(lambda).unwrap_or(f64::NAN)
}

fn within(name: &str, value: f64, target: f64, tol: f64) -> Check {
    Check::new(
        name,
        (value - target).abs() <= tol,
        format!("{value} vs {target} (tol {tol})"),
    )
}

/// Endpoint constants of the closed-form ratio and of the optimal `theta`.
pub fn limits_suite() -> Vec<Check> {
    let r_inf = ratio_closed(1e6);
    let r_zero = ratio_closed(1e-6);
    let lt_zero = 1e-8 * theta_star(1e-8).unwrap_or(f64::NAN);
    let t_inf = theta_star(1e8).unwrap_or(f64::NAN);
    vec![
        within("limits.ratio_inf", r_inf, 10.539, 0.01),
        within("limits.ratio_inf_closed_form", r_inf, ratio_limit_inf(), 1e-3),
        within("limits.ratio_zero", r_zero, 20.601, 0.01),
        within("limits.ratio_zero_56_over_e", r_zero, ratio_limit_zero(), 1e-3),
        within("limits.lambda_theta_zero", lt_zero / 14.0, 1.0, 1e-4),
        within("limits.theta_inf", t_inf / theta_star_limit_inf(), 1.0, 1e-4),
        within("limits.improvement_inf", 32.0 / r_inf, 3.037, 0.01),
        within("limits.improvement_zero", 32.0 / r_zero, 1.553, 0.01),
    ]
}

pub fn run_suite(suite: Suite, seed: u64, cfg: &OptimizerConfig) -> VerifyReport {
    let checks = match suite {
        Suite::Stein => stein_suite(seed),
        Suite::Sandwich => sandwich_suite(seed, cfg),
        Suite::Ordering => ordering_suite(cfg),
        Suite::Limits => limits_suite(),
        Suite::All => {
            let mut all = limits_suite();
            all.extend(stein_suite(seed));
            all.extend(sandwich_suite(seed, cfg));
            all.extend(ordering_suite(cfg));
            all
        }
    };
    VerifyReport { checks }
}
