//! Per-instance bound reports and their JSON/CSV/table renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::closed_bounds::{
    asymptotic_tv, barbour_hall_lower, barbour_hall_upper, corollary_k1_tilde, le_cam_upper,
    theta_star, LAMBDA_EPS,
};
use crate::distributions::{exact_tv_with_limit, ProbVector};
use crate::error::{Error, Result};
use crate::input::Settings;
use crate::k1::{optimize_k1, Variant};

pub const SCHEMA_VERSION: u32 = 1;

/// Which lower-bound coefficients are non-positive (valid but uninformative).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VacuousFlags {
    pub bh_lower: bool,
    pub corollary_lower: bool,
    pub k1_common_alpha_lower: bool,
    pub k1_lower: bool,
}

/// Every bound for one instance. Absolute bounds are `coefficient * sum_p2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub schema_version: u32,
    pub n: usize,
    pub lambda: f64,
    pub sum_p2: f64,
    pub le_cam: f64,
    pub bh_upper: f64,
    pub bh_lower: f64,
    pub corollary_lower: f64,
    /// `None` when `lambda = 0`.
    pub theta_star: Option<f64>,
    pub k1_lower: Option<f64>,
    pub k1_common_alpha_lower: Option<f64>,
    /// `None` when `lambda = 0`.
    pub asymptotic_tv: Option<f64>,
    pub vacuous_flags: VacuousFlags,
    /// `None` when the instance exceeds the exact-computation limit.
    pub exact_tv: Option<f64>,
}

impl BoundReport {
    /// Computes all bounds; the optimised coefficients are included when
    /// `with_k1` is set.
    pub fn compute(p: &ProbVector, settings: &Settings, with_k1: bool) -> Result<Self> {
        let lambda = p.lambda();
        let sum_p2 = p.sum_p2();
        let exact_tv = match exact_tv_with_limit(p, settings.exact_limit) {
            Ok(v) => Some(v),
            Err(Error::InstanceTooLarge { .. }) => None,
            Err(e) => return Err(e),
        };
        let bh_lower = barbour_hall_lower(lambda, sum_p2)?;
        let mut report = Self {
            schema_version: SCHEMA_VERSION,
            n: p.len(),
            lambda,
            sum_p2,
            le_cam: le_cam_upper(p),
            bh_upper: barbour_hall_upper(lambda, sum_p2)?,
            bh_lower,
            corollary_lower: 0.0,
            theta_star: None,
            k1_lower: None,
            k1_common_alpha_lower: None,
            asymptotic_tv: None,
            vacuous_flags: VacuousFlags {
                bh_lower: bh_lower <= 0.0,
                corollary_lower: true,
                k1_common_alpha_lower: true,
                k1_lower: true,
            },
            exact_tv,
        };
        if lambda < LAMBDA_EPS {
            // every Bernoulli is degenerate at 0: all bounds are 0
            return Ok(report);
        }
        let coeff = corollary_k1_tilde(lambda)?;
        report.corollary_lower = coeff * sum_p2;
        report.vacuous_flags.corollary_lower = coeff <= 0.0;
        report.theta_star = Some(theta_star(lambda)?);
        report.asymptotic_tv = Some(asymptotic_tv(lambda, sum_p2)?);
        if with_k1 {
            let three = optimize_k1(lambda, Variant::ThreeParam, &settings.optimizer)?;
            let common = optimize_k1(lambda, Variant::CommonAlpha, &settings.optimizer)?;
            report.k1_lower = Some(three.k1 * sum_p2);
            report.k1_common_alpha_lower = Some(common.k1 * sum_p2);
            report.vacuous_flags.k1_lower = three.vacuous;
            report.vacuous_flags.k1_common_alpha_lower = common.vacuous;
        }
        Ok(report)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: Self = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse {
                line: 0,
                message: format!("unsupported schema_version {}", report.schema_version),
            });
        }
        Ok(report)
    }

    fn fields(&self) -> Vec<(&'static str, String)> {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        vec![
            ("n", self.n.to_string()),
            ("lambda", self.lambda.to_string()),
            ("sum_p2", self.sum_p2.to_string()),
            ("le_cam", self.le_cam.to_string()),
            ("bh_upper", self.bh_upper.to_string()),
            ("exact_tv", opt(self.exact_tv)),
            ("k1_lower", opt(self.k1_lower)),
            ("k1_common_alpha_lower", opt(self.k1_common_alpha_lower)),
            ("corollary_lower", self.corollary_lower.to_string()),
            ("bh_lower", self.bh_lower.to_string()),
            ("theta_star", opt(self.theta_star)),
            ("asymptotic_tv", opt(self.asymptotic_tv)),
        ]
    }

    /// Header plus one data row.
    pub fn to_csv(&self) -> String {
        let fields = self.fields();
        let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
        let row: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
        format!("{}\n{}\n", header.join(","), row.join(","))
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.fields() {
            let v = if v.is_empty() { "-".to_string() } else { v };
            let _ = writeln!(out, "{k:<22} {v}");
        }
        let flags = &self.vacuous_flags;
        let vacuous: Vec<&str> = [
            ("bh_lower", flags.bh_lower),
            ("corollary_lower", flags.corollary_lower),
            ("k1_common_alpha_lower", flags.k1_common_alpha_lower && self.k1_common_alpha_lower.is_some()),
            ("k1_lower", flags.k1_lower && self.k1_lower.is_some()),
        ]
        .iter()
        .filter(|(_, v)| *v)
        .map(|(k, _)| *k)
        .collect();
        if !vacuous.is_empty() {
            let _ = writeln!(out, "{:<22} {}", "vacuous", vacuous.join(" "));
        }
        out
    }

    /// Lower bounds in increasing order of strength, skipping those not computed.
    pub fn lower_bounds(&self) -> Vec<(&'static str, f64)> {
        let mut v = vec![
            ("bh_lower", self.bh_lower),
            ("corollary_lower", self.corollary_lower),
        ];
        if let Some(x) = self.k1_common_alpha_lower {
            v.push(("k1_common_alpha_lower", x));
        }
        if let Some(x) = self.k1_lower {
            v.push(("k1_lower", x));
        }
        v
    }
}
