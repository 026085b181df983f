use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schemes::SchemeId;

/// Percentile levels reported for every scheme.
pub const PERCENTILE_LEVELS: [f64; 5] = [0.05, 0.25, 0.50, 0.75, 0.95];

pub const PERCENTILE_CONVENTION: &str =
    "lower empirical quantile: the smallest sample x with F(x) >= p, where F steps by 1/n at each sorted sample";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Percentiles {
    pub p05: f64,
    pub p25: f64,
    pub p50: f64,
    pub p75: f64,
    pub p95: f64,
}

impl Percentiles {
    pub fn as_array(&self) -> [f64; 5] {
        [self.p05, self.p25, self.p50, self.p75, self.p95]
    }
}

/// Empirical distribution of one scheme's sum rate.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfSummary {
    pub scheme: SchemeId,
    /// Ascending.
    pub sorted_samples: Vec<f64>,
    pub percentiles: Percentiles,
}

impl CdfSummary {
    pub fn median(&self) -> f64 {
        self.percentiles.p50
    }

    pub fn mean(&self) -> f64 {
        self.sorted_samples.iter().sum::<f64>() / self.sorted_samples.len() as f64
    }

    /// `(rate, F(rate))` steps of the empirical CDF.
    pub fn cdf_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.sorted_samples.len();
        self.sorted_samples
            .iter()
            .enumerate()
            .map(move |(i, &x)| (x, (i + 1) as f64 / n as f64))
    }
}

/// Smallest element of `sorted` whose empirical CDF is at least `p`.
pub fn lower_quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let n = sorted.len();
    // Index i (0-based) has F = (i+1)/n; the guard absorbs p·n round-off.
    let rank = (p * n as f64 - 1e-9).ceil().max(1.0) as usize;
    sorted[rank.min(n) - 1]
}

pub fn compute_cdf(scheme: SchemeId, samples: &[f64]) -> Result<CdfSummary> {
    if samples.is_empty() {
        return Err(Error::invalid(format!("no samples for scheme {scheme}")));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid(format!(
            "non-finite sample for scheme {scheme}"
        )));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q = |p| lower_quantile(&sorted, p);
    let percentiles = Percentiles {
        p05: q(PERCENTILE_LEVELS[0]),
        p25: q(PERCENTILE_LEVELS[1]),
        p50: q(PERCENTILE_LEVELS[2]),
        p75: q(PERCENTILE_LEVELS[3]),
        p95: q(PERCENTILE_LEVELS[4]),
    };
    Ok(CdfSummary {
        scheme,
        sorted_samples: sorted,
        percentiles,
    })
}
