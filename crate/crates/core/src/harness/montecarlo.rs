use rayon::prelude::*;

use super::runspec::RunSpec;
use crate::channel::generate_realization;
use crate::error::Result;
use crate::rng::mix;
use crate::schemes::{evaluate_scheme, RateSample};

/// Seed of trial `t`: `mix(master_seed, t)`.
pub fn trial_seed(master_seed: u64, trial: u64) -> u64 {
    mix(master_seed, trial)
}

/// Evaluates every requested scheme on the realization of one trial.
pub fn run_trial(spec: &RunSpec, trial: u64) -> Result<Vec<RateSample>> {
    let seed = trial_seed(spec.master_seed, trial);
    let realization = generate_realization(&spec.scenario, seed)?;
    let power = spec.scenario.ue_power_watts;
    let noise = spec.scenario.noise_power_watts();
    spec.schemes
        .iter()
        .map(|&scheme| {
            evaluate_scheme(scheme, &realization, power, noise, &spec.sdr, seed)
                .map(|s| s.with_trial(trial))
        })
        .collect()
}

/// Runs all trials in parallel. Output is ordered by trial, then by the
/// order of `spec.schemes`, independent of scheduling.
pub fn run_monte_carlo(spec: &RunSpec) -> Result<Vec<RateSample>> {
    spec.validate()?;
    let per_trial: Vec<Vec<RateSample>> = (0..spec.n_trials)
        .into_par_iter()
        .map(|t| run_trial(spec, t))
        .collect::<Result<_>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

/// Sequential reference implementation of [`run_monte_carlo`].
pub fn run_monte_carlo_serial(spec: &RunSpec) -> Result<Vec<RateSample>> {
    spec.validate()?;
    let mut out = Vec::with_capacity(spec.n_trials as usize * spec.schemes.len());
    for t in 0..spec.n_trials {
        out.extend(run_trial(spec, t)?);
    }
    Ok(out)
}
