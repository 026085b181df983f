//! Monte-Carlo driver, statistics and run artifacts.

mod montecarlo;
mod output;
mod runspec;
mod stats;
mod verify;

pub use montecarlo::{run_monte_carlo, run_monte_carlo_serial, run_trial, trial_seed};
pub use output::{
    build_summary, cdf_file_name, emit_outputs, load_summary, read_cdf, read_samples_csv,
    write_samples_csv, OutputPaths, RunSummary, SchemeSummary, SAMPLES_FILE, SAMPLES_HEADER,
    SUMMARY_FILE,
};
pub use runspec::RunSpec;
pub use stats::{
    compute_cdf, lower_quantile, CdfSummary, Percentiles, PERCENTILE_CONVENTION, PERCENTILE_LEVELS,
};
pub use verify::{
    check_paired_invariants, verify_dir, VerifyReport, Violation, ORDER_TOLERANCE, PAIRED_ORDERINGS,
};

use crate::error::Result;
use crate::schemes::RateSample;

/// Per-scheme CDF summaries in the order of `spec.schemes`.
pub fn summarize(samples: &[RateSample], spec: &RunSpec) -> Result<Vec<CdfSummary>> {
    spec.schemes
        .iter()
        .map(|&id| {
            let rates: Vec<f64> = samples
                .iter()
                .filter(|s| s.scheme == id)
                .map(|s| s.sum_rate_bps_hz)
                .collect();
            compute_cdf(id, &rates)
        })
        .collect()
}
