//! The optimised lower-bound coefficient `K1(lambda)`.
//!
//! For a test function `f(k) = (k - alpha1) exp(-(k - alpha2)^2 / (theta lambda))`
//! the Chen–Stein quotient is bounded below by `(1 - h) / (2 g)`, where `h`
//! bounds the relative loss in the numerator and `g` bounds the sup of the
//! Stein operator. `g` needs the global extrema of a Gaussian-weighted
//! quadratic, found through the real roots of a cubic.

pub mod cubic;
pub mod objective;
pub mod search;
pub mod simplex;

pub use cubic::{cubic_real_roots, x_eval, x_extrema, CubicCoeffs, CubicRoots, XExtrema};
pub use objective::{alpha2_bound, g_lambda, h_lambda, k1_objective, K1Params};
pub use search::{optimize_k1, K1SearchResult, OptimizerConfig, Variant};
