use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use ris_core::channel::generate_realization;
use ris_core::harness::{emit_outputs, run_monte_carlo, summarize, verify_dir, VerifyReport};
use ris_core::optimizer::{
    brute_force_phases, build_qcqp, randomize_extract, solve_sdp, SdrParams,
};
use ris_core::{RunSpec, ScenarioConfig, SchemeId};

#[derive(Parser)]
#[command(
    name = "risim",
    version,
    about = "Monte-Carlo simulator for RIS-aided uplink multi-user MIMO"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the Monte-Carlo study and write samples, CDFs and a summary.
    Simulate {
        /// Scenario configuration (JSON).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Total number of users, split between the center and edge groups.
        #[arg(long)]
        users: Option<usize>,
        #[arg(long)]
        elements: Option<usize>,
        /// Comma-separated scheme names.
        #[arg(long, value_delimiter = ',')]
        schemes: Option<Vec<SchemeId>>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Re-check paired invariants and output files of a finished run.
    Verify {
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the SDR design against an exhaustive phase grid on a random instance.
    Oracle {
        #[arg(long)]
        elements: usize,
        #[arg(long)]
        levels: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn print_report(report: &VerifyReport) {
    println!(
        "checked {} samples over {} trials: {} violations, {} file issues",
        report.n_samples,
        report.n_trials,
        report.violations.len(),
        report.file_issues.len()
    );
    for v in report.violations.iter().take(20) {
        eprintln!("violation: {v}");
    }
    for issue in &report.file_issues {
        eprintln!("file issue: {issue}");
    }
}

fn simulate(
    config: Option<PathBuf>,
    trials: u64,
    seed: u64,
    users: Option<usize>,
    elements: Option<usize>,
    schemes: Option<Vec<SchemeId>>,
    out: PathBuf,
) -> Result<bool> {
    let mut scenario = match &config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(k) = users {
        scenario = scenario.with_users(k);
    }
    if let Some(n) = elements {
        scenario = scenario.with_elements(n);
    }
    let spec = RunSpec {
        scenario,
        schemes: schemes.unwrap_or_else(|| SchemeId::ALL.to_vec()),
        n_trials: trials,
        master_seed: seed,
        sdr: SdrParams::default(),
        output_dir: out,
    };
    spec.validate()?;

    let samples = run_monte_carlo(&spec)?;
    let summaries = summarize(&samples, &spec)?;
    let paths = emit_outputs(&samples, &summaries, &spec)?;

    println!(
        "{:<9} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "scheme", "p05", "p25", "median", "p75", "p95"
    );
    for s in &summaries {
        let p = s.percentiles;
        println!(
            "{:<9} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            s.scheme.as_str(),
            p.p05,
            p.p25,
            p.p50,
            p.p75,
            p.p95
        );
    }
    println!("wrote {}", paths.summary.display());

    let report = verify_dir(&spec.output_dir)?;
    print_report(&report);
    Ok(report.passed())
}

fn oracle(elements: usize, levels: usize, seed: u64, config: Option<PathBuf>) -> Result<bool> {
    let scenario = match &config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    }
    .with_elements(elements);
    scenario.validate()?;
    let r = generate_realization(&scenario, seed)?;
    let (grid_phases, grid) = brute_force_phases(&r.f, &r.g_matrix, &r.d, levels)?;

    let params = SdrParams::default();
    let problem = build_qcqp(&r.f, &r.g_matrix, &r.d)?;
    let sol = solve_sdp(&problem, &params.sdp_options())?;
    let ext = randomize_extract(&sol, &problem, params.n_candidates, seed)?;

    // The relaxation bounds the continuous optimum, which bounds any grid point.
    let scale = grid.abs().max(f64::MIN_POSITIVE);
    let bound_ok = sol.objective >= grid - 1e-9 * scale;
    let report = serde_json::json!({
        "elements": elements,
        "levels": levels,
        "seed": seed,
        "grid_objective": grid,
        "grid_phases": grid_phases.theta(),
        "sdp_objective": sol.objective,
        "sdp_relative_gap": sol.relative_gap,
        "sdp_certified": sol.certified,
        "extracted_objective": ext.objective,
        "extracted_phases": ext.phases.theta(),
        "extraction_ratio": ext.objective / scale,
        "sdp_bounds_grid": bound_ok,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(bound_ok && sol.certified)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Simulate {
            config,
            trials,
            seed,
            users,
            elements,
            schemes,
            out,
        } => simulate(config, trials, seed, users, elements, schemes, out),
        Command::Verify { out } => {
            if !out.is_dir() {
                bail!("{} is not a directory", out.display());
            }
            let report =
                verify_dir(&out).with_context(|| format!("verifying {}", out.display()))?;
            print_report(&report);
            Ok(report.passed())
        }
        Command::Oracle {
            elements,
            levels,
            seed,
            config,
        } => oracle(elements, levels, seed, config),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
