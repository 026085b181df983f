//! Post-hoc checks of a finished run.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use super::output::{
    cdf_file_name, load_summary, read_cdf, read_samples_csv, SAMPLES_FILE, SUMMARY_FILE,
};
use crate::error::Result;
use crate::schemes::{RateSample, SchemeId};

/// Pointwise orderings `lower ≤ upper` that hold on every realization.
pub const PAIRED_ORDERINGS: [(SchemeId, SchemeId); 7] = [
    (SchemeId::DC, SchemeId::JtUpper),
    (SchemeId::FDMA, SchemeId::FdmaUs),
    (SchemeId::FdmaUs, SchemeId::TDMA),
    (SchemeId::TDMA, SchemeId::JtUpper),
    (SchemeId::JT, SchemeId::JtUpper),
    (SchemeId::OT, SchemeId::JtUpper),
    (SchemeId::TDMA, SchemeId::OT),
];

/// Slack for floating-point round-off in the rate formulas.
pub const ORDER_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub trial: u64,
    pub lower: SchemeId,
    pub upper: SchemeId,
    pub lower_rate: f64,
    pub upper_rate: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "trial {}: {} = {} exceeds {} = {}",
            self.trial, self.lower, self.lower_rate, self.upper, self.upper_rate
        )
    }
}

fn exceeds(lower: f64, upper: f64) -> bool {
    lower > upper + ORDER_TOLERANCE * upper.abs().max(1.0)
}

/// Checks [`PAIRED_ORDERINGS`] for every trial where both schemes are present.
pub fn check_paired_invariants(samples: &[RateSample]) -> Vec<Violation> {
    let mut by_trial: BTreeMap<u64, BTreeMap<SchemeId, f64>> = BTreeMap::new();
    for s in samples {
        by_trial
            .entry(s.trial)
            .or_default()
            .insert(s.scheme, s.sum_rate_bps_hz);
    }
    let mut out = Vec::new();
    for (&trial, rates) in &by_trial {
        for (lower, upper) in PAIRED_ORDERINGS {
            if let (Some(&a), Some(&b)) = (rates.get(&lower), rates.get(&upper)) {
                if exceeds(a, b) {
                    out.push(Violation {
                        trial,
                        lower,
                        upper,
                        lower_rate: a,
                        upper_rate: b,
                    });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub n_samples: usize,
    pub n_trials: usize,
    pub violations: Vec<Violation>,
    /// Problems with the emitted files (CDF shape, percentile order, ...).
    pub file_issues: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.file_issues.is_empty()
    }
}

/// Re-reads a run directory and checks the paired invariants, the CDF
/// files and the percentile table.
pub fn verify_dir(dir: &Path) -> Result<VerifyReport> {
    let samples = read_samples_csv(&dir.join(SAMPLES_FILE))?;
    let mut report = VerifyReport {
        n_samples: samples.len(),
        n_trials: samples
            .iter()
            .map(|s| s.trial)
            .collect::<std::collections::BTreeSet<_>>()
            .len(),
        violations: check_paired_invariants(&samples),
        file_issues: Vec::new(),
    };
    if samples
        .iter()
        .any(|s| !s.sum_rate_bps_hz.is_finite() || s.sum_rate_bps_hz < 0.0)
    {
        report
            .file_issues
            .push("negative or non-finite rate in samples.csv".into());
    }

    let summary = load_summary(&dir.join(SUMMARY_FILE))?;
    for s in &summary.schemes {
        let p = s.percentiles.as_array();
        if p.windows(2).any(|w| w[0] > w[1]) {
            report
                .file_issues
                .push(format!("{}: percentiles not monotone", s.scheme));
        }
        let path = dir.join(cdf_file_name(s.scheme));
        let points = read_cdf(&path)?;
        if points.len() != s.n_samples {
            report.file_issues.push(format!(
                "{}: {} CDF points for {} samples",
                s.scheme,
                points.len(),
                s.n_samples
            ));
        }
        if points
            .windows(2)
            .any(|w| w[0].0 > w[1].0 || w[0].1 >= w[1].1)
        {
            report
                .file_issues
                .push(format!("{}: CDF not increasing", s.scheme));
        }
        if points.last().map(|p| p.1) != Some(1.0) {
            report
                .file_issues
                .push(format!("{}: CDF does not end at 1", s.scheme));
        }
    }
    Ok(report)
}
