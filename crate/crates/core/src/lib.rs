//! Bounds on the total variation distance between a sum of independent
//! Bernoulli variables and the Poisson law with the same mean.
//!
//! The crate computes the exact distance for moderate instances, the
//! classical upper and lower bounds, and an optimised Chen–Stein lower
//! bound whose coefficient is found numerically.
//!
//! ```
//! use tvbounds::{exact_tv_poisson_approx, ProbVector};
//!
//! let p = ProbVector::new(vec![0.1, 0.2]).unwrap();
//! let tv = exact_tv_poisson_approx(&p).unwrap();
//! assert!(tv > 0.0 && tv <= p.sum_p2());
//! ```

pub mod closed_bounds;
pub mod distributions;
pub mod error;
pub mod input;
pub mod k1;
pub mod report;
pub mod stein;
pub mod sweep;
pub mod verify;

pub use closed_bounds::{
    asymptotic_tv, barbour_hall_lower, barbour_hall_upper, bh_lower_coeff, bh_upper_coeff,
    corollary_k1_tilde, le_cam_upper, theta_star,
};
pub use distributions::{
    exact_tv_poisson_approx, exact_tv_with_limit, poisson_binomial_pmf, poisson_pmf,
    total_variation, DistTable, ProbVector, DEFAULT_EXACT_LIMIT,
};
pub use error::{Error, Result};
pub use input::{parse_config, parse_prob_csv, parse_prob_list, Settings};
pub use k1::{k1_objective, optimize_k1, K1Params, K1SearchResult, OptimizerConfig, Variant};
pub use report::BoundReport;
pub use stein::{chen_stein_quotient, stein_transfer_both_sides, SteinParams};
pub use sweep::{render_sweep_csv, sweep, Scale, SweepRow};
pub use verify::{run_suite, Check, Suite, VerifyReport};
