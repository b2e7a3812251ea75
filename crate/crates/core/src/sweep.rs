//! Upper/lower coefficient ratios over a grid of means.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_bounds::{bh_lower_coeff, bh_upper_coeff};
use crate::error::{Error, Result};
use crate::k1::{optimize_k1, OptimizerConfig, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Log,
    Linear,
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log" => Ok(Scale::Log),
            "linear" => Ok(Scale::Linear),
            _ => Err(Error::Parse {
                line: 0,
                message: format!("unknown scale `{s}`"),
            }),
        }
    }
}

/// One grid point. Coefficients of variants that were not requested are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub upper_coeff: f64,
    pub k1_three: Option<f64>,
    pub k1_common: Option<f64>,
    pub k1_closed: Option<f64>,
    pub bh_lower_coeff: f64,
    pub ratio_three: Option<f64>,
    pub ratio_common: Option<f64>,
    pub ratio_closed: Option<f64>,
    pub ratio_bh: f64,
}

pub const SWEEP_HEADER: [&str; 10] = [
    "lambda",
    "upper_coeff",
    "k1_three",
    "k1_common",
    "k1_closed",
    "bh_lower_coeff",
    "ratio_three",
    "ratio_common",
    "ratio_closed",
    "ratio_bh",
];

impl SweepRow {
    pub fn compute(lambda: f64, variants: &[Variant], cfg: &OptimizerConfig) -> Result<Self> {
        let upper = bh_upper_coeff(lambda)?;
        let lower = bh_lower_coeff(lambda)?;
        let coeff = |v: Variant| -> Result<Option<f64>> {
            if variants.contains(&v) {
                Ok(Some(optimize_k1(lambda, v, cfg)?.k1))
            } else {
                Ok(None)
            }
        };
        let k1_three = coeff(Variant::ThreeParam)?;
        let k1_common = coeff(Variant::CommonAlpha)?;
        let k1_closed = coeff(Variant::ClosedForm)?;
        let ratio = |k: Option<f64>| k.map(|k| upper / k);
        Ok(Self {
            lambda,
            upper_coeff: upper,
            k1_three,
            k1_common,
            k1_closed,
            bh_lower_coeff: lower,
            ratio_three: ratio(k1_three),
            ratio_common: ratio(k1_common),
            ratio_closed: ratio(k1_closed),
            ratio_bh: upper / lower,
        })
    }

    /// Cells in header order; `Display` gives the shortest round-trip form.
    pub fn to_csv_line(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        [
            self.lambda.to_string(),
            self.upper_coeff.to_string(),
            opt(self.k1_three),
            opt(self.k1_common),
            opt(self.k1_closed),
            self.bh_lower_coeff.to_string(),
            opt(self.ratio_three),
            opt(self.ratio_common),
            opt(self.ratio_closed),
            self.ratio_bh.to_string(),
        ]
        .join(",")
    }
}

/// `points` values from `lo` to `hi`, both included exactly.
pub fn lambda_grid(lo: f64, hi: f64, points: usize, scale: Scale) -> Result<Vec<f64>> {
    if !(lo > 0.0 && lo.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "lambda_min",
            value: lo,
            reason: "must be positive and finite",
        });
    }
    if !(hi > lo && hi.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "lambda_max",
            value: hi,
            reason: "must be finite and exceed lambda_min",
        });
    }
    if points < 2 {
        return Err(Error::InvalidParameter {
            name: "points",
            value: points as f64,
            reason: "need at least 2",
        });
    }
    let last = (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points)
        .map(|i| {
            let t = i as f64 / last;
            match scale {
                Scale::Log => (lo.ln() + t * (hi.ln() - lo.ln())).exp(),
                Scale::Linear => lo + t * (hi - lo),
            }
        })
        .collect();
    grid[0] = lo;
    grid[points - 1] = hi;
    Ok(grid)
}

/// Rows in grid order; rows are computed in parallel.
pub fn sweep(
    lo: f64,
    hi: f64,
    points: usize,
    scale: Scale,
    variants: &[Variant],
    cfg: &OptimizerConfig,
) -> Result<Vec<SweepRow>> {
    lambda_grid(lo, hi, points, scale)?
        .into_par_iter()
        .map(|lambda| SweepRow::compute(lambda, variants, cfg))
        .collect()
}

pub fn render_sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = SWEEP_HEADER.join(",");
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.to_csv_line());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_exact() {
        let g = lambda_grid(0.1, 100.0, 50, Scale::Log).unwrap();
        assert_eq!(g.len(), 50);
        assert_eq!((g[0], g[49]), (0.1, 100.0));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        let g = lambda_grid(1.0, 2.0, 3, Scale::Linear).unwrap();
        assert_eq!(g, vec![1.0, 1.5, 2.0]);
    }

    #[test]
    fn grid_rejects_bad_ranges() {
        assert!(lambda_grid(0.0, 1.0, 5, Scale::Log).is_err());
        assert!(lambda_grid(2.0, 1.0, 5, Scale::Log).is_err());
        assert!(lambda_grid(1.0, 2.0, 1, Scale::Linear).is_err());
        assert!(lambda_grid(1.0, f64::INFINITY, 3, Scale::Linear).is_err());
    }

    #[test]
    fn closed_only_gates_columns() {
        let rows = sweep(1.0, 10.0, 3, Scale::Log, &[Variant::ClosedForm], &OptimizerConfig::default()).unwrap();
        let csv = render_sweep_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), SWEEP_HEADER.join(","));
        for line in lines {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells.len(), 10);
            assert!(cells[2].is_empty() && cells[3].is_empty() && cells[6].is_empty());
            assert!(!cells[4].is_empty());
        }
    }

    #[test]
    fn bh_ratio_algebra() {
        for lambda in [0.05, 1.0, 7.0] {
            let row = SweepRow::compute(lambda, &[], &OptimizerConfig::default()).unwrap();
            let expect = 32.0 * -(-lambda).exp_m1() * lambda.max(1.0) / lambda;
            assert!((row.ratio_bh - expect).abs() < 1e-12 * expect);
        }
    }

    #[test]
    fn scale_parse() {
        assert_eq!("log".parse::<Scale>().unwrap(), Scale::Log);
        assert!("cubic".parse::<Scale>().is_err());
    }
}
