//! Extrema of `x(u) = (c0 + c1 u + c2 u^2) e^{-u^2}`.
//!
//! Critical points of `x` are the real zeros of
//! `2 c2 u^3 + 2 c1 u^2 - 2 (c2 - c0) u - c1`. With `c2 < 0` the function is
//! negative for large `|u|` and tends to zero at both ends, so its infimum is
//! attained at a critical point while its supremum is either attained there
//! or equals the limit value `0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients of the quadratic prefactor of `x(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicCoeffs {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl CubicCoeffs {
    pub fn new(c0: f64, c1: f64, c2: f64) -> Result<Self> {
        if !(c0.is_finite() && c1.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "c0/c1",
                value: if c0.is_finite() { c1 } else { c0 },
                reason: "must be finite",
            });
        }
        if !(c2.is_finite() && c2 < 0.0) {
            return Err(Error::InvalidParameter {
                name: "c2",
                value: c2,
                reason: "must be finite and < 0",
            });
        }
        Ok(Self { c0, c1, c2 })
    }

    /// `c0 = (alpha2 - alpha1)(lambda - alpha2)`,
    /// `c1 = sqrt(theta lambda)(lambda + alpha1 - 2 alpha2)`, `c2 = -theta lambda`.
    pub fn from_params(lambda: f64, alpha1: f64, alpha2: f64, theta: f64) -> Result<Self> {
        let tl = theta * lambda;
        Self::new(
            (alpha2 - alpha1) * (lambda - alpha2),
            tl.sqrt() * (lambda + alpha1 - 2.0 * alpha2),
            -tl,
        )
    }

    /// Coefficients `[a3, a2, a1, a0]` of the critical-point cubic.
    pub fn cubic(&self) -> [f64; 4] {
        [
            2.0 * self.c2,
            2.0 * self.c1,
            -2.0 * (self.c2 - self.c0),
            -self.c1,
        ]
    }

    fn scale(&self) -> f64 {
        self.cubic().iter().fold(1.0f64, |m, a| m.max(a.abs()))
    }
}

/// Real zeros of the critical-point cubic, ascending, with their residuals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicRoots {
    pub roots: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl CubicRoots {
    pub fn max_abs_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()))
    }
}

/// `x(u) = (c0 + c1 u + c2 u^2) exp(-u^2)`.
pub fn x_eval(c: &CubicCoeffs, u: f64) -> f64 {
    (c.c0 + u * (c.c1 + u * c.c2)) * (-u * u).exp()
}

fn horner(a: &[f64; 4], u: f64) -> f64 {
    ((a[0] * u + a[1]) * u + a[2]) * u + a[3]
}

fn horner_deriv(a: &[f64; 4], u: f64) -> f64 {
    (3.0 * a[0] * u + 2.0 * a[1]) * u + a[2]
}

/// Newton steps that are kept only while they shrink the residual.
fn polish(a: &[f64; 4], mut u: f64) -> f64 {
    let mut r = horner(a, u).abs();
    for _ in 0..16 {
        if r == 0.0 {
            break;
        }
        let d = horner_deriv(a, u);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = u - horner(a, u) / d;
        let rn = horner(a, next).abs();
        if rn.is_nan() || rn >= r {
            break;
        }
        u = next;
        r = rn;
    }
    u
}

/// Real roots of `a3 u^3 + a2 u^2 + a1 u + a0` with `a3 != 0`.
///
/// The depressed cubic is classified by its discriminant: the trigonometric
/// form covers three real roots, Cardano's formula the single-root case.
/// Every root is polished against the original coefficients.
pub fn solve_cubic(a: &[f64; 4]) -> Vec<f64> {
    let b = a[1] / a[0];
    let c = a[2] / a[0];
    let d = a[3] / a[0];
    let shift = b / 3.0;
    let p = c - b * shift;
    let q = 2.0 * shift * shift * shift - shift * c + d;
    let half_q = 0.5 * q;
    let third_p = p / 3.0;
    let disc = half_q * half_q + third_p * third_p * third_p;

    let mut roots: Vec<f64> = if p == 0.0 && q == 0.0 {
        vec![0.0]
    } else if disc <= 0.0 {
        let m = 2.0 * (-third_p).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (phi - 2.0 * PI * k as f64 / 3.0).cos())
            .collect()
    } else {
        let s = disc.sqrt();
        vec![(-half_q + s).cbrt() + (-half_q - s).cbrt()]
    };
    for r in roots.iter_mut() {
        *r = polish(a, *r - shift);
    }
    roots.sort_by(|x, y| x.total_cmp(y));
    roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * x.abs().max(1.0));
    roots
}

/// The real zero set of `2 c2 u^3 + 2 c1 u^2 - 2 (c2 - c0) u - c1`.
pub fn cubic_real_roots(c: &CubicCoeffs) -> CubicRoots {
    let a = c.cubic();
    let roots = solve_cubic(&a);
    if roots.len() != 3 {
        log::debug!(
            "critical-point cubic for {:?} has {} distinct real root(s)",
            c,
            roots.len()
        );
    }
    let residuals = roots.iter().map(|&u| horner(&a, u)).collect();
    CubicRoots { roots, residuals }
}

/// Infimum and supremum of `x` over the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XExtrema {
    pub min: f64,
    pub max: f64,
}

/// Extrema of `x` over the critical points and the limit value `0` at
/// `u -> +-inf`.
pub fn x_extrema(c: &CubicCoeffs) -> XExtrema {
    let roots = cubic_real_roots(c);
    let (mut min, mut max) = (0.0f64, 0.0f64);
    for &u in &roots.roots {
        let v = x_eval(c, u);
        min = min.min(v);
        max = max.max(v);
    }
    XExtrema { min, max }
}

/// Bound used by [`CubicRoots`] checks: `tol * max(1, |coefficients|)`.
pub fn residual_tolerance(c: &CubicCoeffs, tol: f64) -> f64 {
    tol * c.scale()
}
