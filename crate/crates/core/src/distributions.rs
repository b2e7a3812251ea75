//! Exact pmfs of the Poisson-binomial and Poisson laws and the total
//! variation distance between them.
//!
//! Everything here is exact up to double-precision rounding. The
//! Poisson-binomial pmf lives on `[0, n]`, so the distance to a Poisson law
//! splits into a finite sum plus the Poisson mass above `n`, and no
//! truncation heuristic enters the headline quantity.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{check_nonnegative, Error, Result};

/// Largest instance accepted by [`exact_tv_poisson_approx`] by default.
pub const DEFAULT_EXACT_LIMIT: usize = 5000;

/// Success probabilities `p_1..p_n` of independent Bernoulli variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbVector {
    probs: Vec<f64>,
    lambda: f64,
    sum_p2: f64,
}

impl ProbVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !(p.is_finite() && (0.0..=1.0).contains(*p)))
        {
            return Err(Error::InvalidProbability { index, value });
        }
        let lambda = probs.iter().sum();
        let sum_p2 = probs.iter().map(|p| p * p).sum();
        Ok(Self {
            probs,
            lambda,
            sum_p2,
        })
    }

    /// `n` copies of `lambda / n`, i.e. the binomial instance with mean `lambda`.
    pub fn uniform(lambda: f64, n: usize) -> Result<Self> {
        check_nonnegative("lambda", lambda)?;
        if n == 0 {
            return Err(Error::EmptyInstance);
        }
        Self::new(vec![lambda / n as f64; n])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Mean of the Bernoulli sum, `sum p_i`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `sum p_i^2`.
    pub fn sum_p2(&self) -> f64 {
        self.sum_p2
    }

    /// The same instance with entry `j` removed.
    pub fn without(&self, j: usize) -> Self {
        let mut probs = self.probs.clone();
        probs.remove(j);
        // entries were already validated
        Self::new(probs).expect("subset of a valid instance")
    }
}

impl TryFrom<Vec<f64>> for ProbVector {
    type Error = Error;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        Self::new(probs)
    }
}

impl From<ProbVector> for Vec<f64> {
    fn from(p: ProbVector) -> Self {
        p.probs
    }
}

/// A pmf on `{0, ..., support_max}` with a certified bound on the mass above
/// `support_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistTable {
    pmf: Vec<f64>,
    tail_mass_bound: f64,
}

impl DistTable {
    pub fn new(pmf: Vec<f64>, tail_mass_bound: f64) -> Result<Self> {
        if pmf.is_empty() {
            return Err(Error::EmptyInstance);
        }
        if let Some(&value) = pmf.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidParameter {
                name: "pmf",
                value,
                reason: "entries must be finite and >= 0",
            });
        }
        check_nonnegative("tail_mass_bound", tail_mass_bound)?;
        Ok(Self {
            pmf,
            tail_mass_bound,
        })
    }

    /// Point mass at `k`.
    pub fn dirac(k: usize) -> Self {
        let mut pmf = vec![0.0; k + 1];
        pmf[k] = 1.0;
        Self {
            pmf,
            tail_mass_bound: 0.0,
        }
    }

    pub fn support_max(&self) -> usize {
        self.pmf.len() - 1
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    /// Probability of `k`, zero outside the tabulated support.
    pub fn get(&self, k: usize) -> f64 {
        self.pmf.get(k).copied().unwrap_or(0.0)
    }

    pub fn tail_mass_bound(&self) -> f64 {
        self.tail_mass_bound
    }

    pub fn total_mass(&self) -> f64 {
        self.pmf.iter().sum()
    }

    /// `E[phi(K)]` over the tabulated support.
    pub fn expect(&self, mut phi: impl FnMut(usize) -> f64) -> f64 {
        self.pmf
            .iter()
            .enumerate()
            .map(|(k, &w)| if w == 0.0 { 0.0 } else { w * phi(k) })
            .sum()
    }
}

fn convolve_bernoulli(pmf: &mut Vec<f64>, p: f64) {
    pmf.push(0.0);
    let q = 1.0 - p;
    for k in (1..pmf.len()).rev() {
        pmf[k] = pmf[k] * q + pmf[k - 1] * p;
    }
    pmf[0] *= q;
}

/// Exact pmf of `W = X_1 + ... + X_n` by forward convolution.
pub fn poisson_binomial_pmf(p: &ProbVector) -> DistTable {
    let mut pmf = Vec::with_capacity(p.len() + 1);
    pmf.push(1.0);
    for &pi in p.probs() {
        convolve_bernoulli(&mut pmf, pi);
    }
    DistTable {
        pmf,
        tail_mass_bound: 0.0,
    }
}

/// Same as [`poisson_binomial_pmf`] for a plain slice, skipping index `skip`.
pub(crate) fn leave_one_out_pmf(probs: &[f64], skip: usize) -> Vec<f64> {
    let mut pmf = Vec::with_capacity(probs.len());
    pmf.push(1.0);
    for (i, &pi) in probs.iter().enumerate() {
        if i != skip {
            convolve_bernoulli(&mut pmf, pi);
        }
    }
    pmf
}

/// `ln Pr[Z = k]` for `Z ~ Po(lambda)`.
pub fn poisson_ln_pmf(lambda: f64, k: u64) -> f64 {
    if lambda == 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    let kf = k as f64;
    kf * lambda.ln() - lambda - ln_gamma(kf + 1.0)
}

/// `Pr[Z > n]` for `Z ~ Po(lambda)`.
///
/// Above the mean the tail is summed directly so that small tails keep
/// their relative accuracy; below it the complement of the CDF is used.
pub fn poisson_upper_tail(lambda: f64, n: u64) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    if (n as f64) >= lambda {
        let mut k = n + 1;
        let mut term = poisson_ln_pmf(lambda, k).exp();
        let mut sum = 0.0;
        while term > 0.0 {
            sum += term;
            if term <= sum * 1e-18 {
                break;
            }
            k += 1;
            term *= lambda / k as f64;
        }
        sum
    } else {
        let cdf: f64 = (0..=n).map(|k| poisson_ln_pmf(lambda, k).exp()).sum();
        (1.0 - cdf).max(0.0)
    }
}

/// Poisson pmf on `[0, support_max]`, evaluated in log space.
pub fn poisson_pmf(lambda: f64, support_max: usize) -> Result<DistTable> {
    check_nonnegative("lambda", lambda)?;
    let pmf = (0..=support_max as u64)
        .map(|k| poisson_ln_pmf(lambda, k).exp())
        .collect();
    Ok(DistTable {
        pmf,
        tail_mass_bound: poisson_upper_tail(lambda, support_max as u64),
    })
}

/// Total variation distance `1/2 sum |P(k) - Q(k)|`.
///
/// Supports are aligned by zero padding. The unresolved mass above each
/// table's support contributes `1/2 (tail_P + tail_Q)`, which is exact when
/// at most one of the tables carries a tail and an upper bound otherwise.
pub fn total_variation(p: &DistTable, q: &DistTable) -> f64 {
    let k_max = p.support_max().max(q.support_max());
    let body: f64 = (0..=k_max).map(|k| (p.get(k) - q.get(k)).abs()).sum();
    let tail = p.tail_mass_bound + q.tail_mass_bound;
    (0.5 * (body + tail)).clamp(0.0, 1.0)
}

/// `d_TV(P_W, Po(lambda))` with the default size limit.
pub fn exact_tv_poisson_approx(p: &ProbVector) -> Result<f64> {
    exact_tv_with_limit(p, DEFAULT_EXACT_LIMIT)
}

/// `d_TV(P_W, Po(lambda))`, exact up to rounding, for `n <= limit`.
pub fn exact_tv_with_limit(p: &ProbVector, limit: usize) -> Result<f64> {
    if p.len() > limit {
        return Err(Error::InstanceTooLarge { n: p.len(), limit });
    }
    let w = poisson_binomial_pmf(p);
    let z = poisson_pmf(p.lambda(), p.len())?;
    Ok(total_variation(&w, &z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(v: &[f64]) -> ProbVector {
        ProbVector::new(v.to_vec()).unwrap()
    }

    /// Full enumeration of the `2^n` outcomes.
    fn enumerate_pmf(p: &[f64]) -> Vec<f64> {
        let n = p.len();
        let mut pmf = vec![0.0; n + 1];
        for mask in 0u32..(1 << n) {
            let mut pr = 1.0;
            for (i, &pi) in p.iter().enumerate() {
                pr *= if mask & (1 << i) != 0 { pi } else { 1.0 - pi };
            }
            pmf[mask.count_ones() as usize] += pr;
        }
        pmf
    }

    #[test]
    fn rejects_out_of_range_probability() {
        assert!(matches!(
            ProbVector::new(vec![0.2, 1.5]),
            Err(Error::InvalidProbability { index: 1, .. })
        ));
        assert!(ProbVector::new(vec![f64::NAN]).is_err());
        assert!(ProbVector::new(vec![-0.0001]).is_err());
    }

    #[test]
    fn empty_instance_is_point_mass_at_zero() {
        let t = poisson_binomial_pmf(&pv(&[]));
        assert_eq!(t.pmf(), &[1.0]);
        assert_eq!(t.tail_mass_bound(), 0.0);
    }

    #[test]
    fn symmetric_binomial() {
        let t = poisson_binomial_pmf(&pv(&[0.5, 0.5]));
        assert_eq!(t.pmf(), &[0.25, 0.5, 0.25]);
    }

    #[test]
    fn two_item_enumeration() {
        let t = poisson_binomial_pmf(&pv(&[0.1, 0.2]));
        for (a, b) in t.pmf().iter().zip([0.72, 0.26, 0.02]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn certain_and_impossible_entries() {
        let t = poisson_binomial_pmf(&pv(&[1.0, 0.0, 1.0]));
        assert_eq!(t.pmf(), &[0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn matches_enumeration_oracle() {
        let p = [0.03, 0.91, 0.5, 0.27, 0.66, 0.12, 0.999, 0.4, 0.05, 0.73, 0.2, 0.58];
        let dp = poisson_binomial_pmf(&pv(&p));
        let brute = enumerate_pmf(&p);
        for (a, b) in dp.pmf().iter().zip(&brute) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn poisson_values() {
        let t = poisson_pmf(1.0, 5).unwrap();
        assert!((t.get(0) - (-1.0f64).exp()).abs() < 1e-15);
        let t = poisson_pmf(2.0, 5).unwrap();
        // e^-2 * 8 / 6
        assert!((t.get(3) - 0.180_447_044_315_483_6).abs() < 1e-15);
        let t = poisson_pmf(0.0, 4).unwrap();
        assert_eq!(t.pmf(), &[1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(t.tail_mass_bound(), 0.0);
        assert!(poisson_pmf(-1.0, 3).is_err());
    }

    #[test]
    fn poisson_normalization_and_monotone_truncation() {
        for &lambda in &[0.01, 0.7, 3.0, 25.0, 400.0] {
            let mut prev = 0.0;
            for k in [0usize, 1, 3, 10, 40, 200, 1000] {
                let t = poisson_pmf(lambda, k).unwrap();
                let mass = t.total_mass();
                assert!(mass >= prev);
                prev = mass;
                let total = mass + t.tail_mass_bound();
                assert!((total - 1.0).abs() <= 1e-12, "lambda={lambda} k={k} total={total}");
            }
        }
    }

    #[test]
    fn upper_tail_small_values_keep_relative_accuracy() {
        // Pr[Z > 10] for Z ~ Po(0.5), summed by hand far past the tail
        let direct: f64 = (11..60).map(|k| poisson_ln_pmf(0.5, k).exp()).sum();
        let tail = poisson_upper_tail(0.5, 10);
        assert!(((tail - direct) / direct).abs() < 1e-13);
    }

    #[test]
    fn tv_identity_and_disjoint() {
        let a = poisson_pmf(1.3, 20).unwrap();
        assert_eq!(total_variation(&a, &a), a.tail_mass_bound());
        let e = poisson_binomial_pmf(&pv(&[0.3, 0.3]));
        assert_eq!(total_variation(&e, &e), 0.0);
        assert_eq!(total_variation(&DistTable::dirac(0), &DistTable::dirac(1)), 1.0);
    }

    #[test]
    fn tv_two_item_instance() {
        let w = poisson_binomial_pmf(&pv(&[0.1, 0.2]));
        let z = poisson_pmf(0.3, 2).unwrap();
        // 40-digit enumeration with the analytic Poisson tail
        assert!((total_variation(&w, &z) - 0.037_754_533_795_484_64).abs() < 1e-15);
    }

    #[test]
    fn exact_tv_single_bernoulli() {
        assert_eq!(exact_tv_poisson_approx(&pv(&[0.0])).unwrap(), 0.0);
        for &p in &[0.01, 0.1, 0.5, 0.9] {
            let tv = exact_tv_poisson_approx(&pv(&[p])).unwrap();
            let closed = p * -(-p).exp_m1();
            assert!((tv - closed).abs() <= 1e-12, "p={p}");
        }
    }

    #[test]
    fn exact_tv_ten_equal_items() {
        let tv = exact_tv_poisson_approx(&pv(&[0.1; 10])).unwrap();
        assert!((tv - 0.029_311_571_742_836_52).abs() < 1e-14);
    }

    #[test]
    fn exact_tv_size_limit() {
        let p = ProbVector::uniform(1.0, 11).unwrap();
        assert!(matches!(
            exact_tv_with_limit(&p, 10),
            Err(Error::InstanceTooLarge { n: 11, limit: 10 })
        ));
        assert!(exact_tv_with_limit(&p, 11).is_ok());
    }

    #[test]
    fn serde_rejects_invalid_vectors() {
        let p: ProbVector = serde_json::from_str("[0.1, 0.2]").unwrap();
        assert!((p.lambda() - 0.3).abs() < 1e-15);
        assert!(serde_json::from_str::<ProbVector>("[0.1, 2.0]").is_err());
    }
}
