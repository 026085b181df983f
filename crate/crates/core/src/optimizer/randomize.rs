use num_complex::Complex64;

use super::phase::PhaseConfig;
use super::qcqp::QcqpProblem;
use super::sdp::SdpSolution;
use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::{complex_normal, rng_from_seed};

/// Draws with a vanishing last entry are redrawn at most this many times.
const MAX_REDRAWS: usize = 1000;

/// Best unit-modulus candidate recovered from a lifted SDP solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub phases: PhaseConfig,
    /// `‖f Φ G + d‖²` at `phases`.
    pub objective: f64,
}

/// Gaussian randomization: factor `V* = U Σ U^H`, draw
/// `v̄ = U Σ^{1/2} r` with `r ~ CN(0, I)`, and read the phases off
/// `v̄ / v̄_{N+1}`. Returns the best of `n_candidates` draws.
///
/// Ties keep the earliest draw.
pub fn randomize_extract(
    solution: &SdpSolution,
    problem: &QcqpProblem,
    n_candidates: usize,
    seed: u64,
) -> Result<Extraction> {
    if n_candidates == 0 {
        return Err(Error::invalid(
            "at least one randomization candidate is required",
        ));
    }
    let n = problem.n_elements() + 1;
    if solution.v_matrix.nrows() != n || solution.v_matrix.ncols() != n {
        return Err(Error::invalid(format!(
            "SDP solution is {}x{}, problem expects {n}x{n}",
            solution.v_matrix.nrows(),
            solution.v_matrix.ncols()
        )));
    }
    let (values, vectors) = linalg::hermitian_eigen(solution.v_matrix.as_ref())?;
    // Σ^{1/2} columns, negative (round-off) eigenvalues clamped to zero.
    let factor: Vec<(usize, f64)> = values
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(i, &w)| (i, w.sqrt()))
        .collect();
    if factor.is_empty() {
        return Err(Error::Numerical(
            "SDP solution has no positive eigenvalue".into(),
        ));
    }

    let mut rng = rng_from_seed(seed);
    let mut r = vec![Complex64::new(0.0, 0.0); factor.len()];
    let mut v_bar = vec![Complex64::new(0.0, 0.0); n];
    let mut best: Option<Extraction> = None;

    for _ in 0..n_candidates {
        let mut attempts = 0;
        loop {
            r.iter_mut().for_each(|z| *z = complex_normal(&mut rng));
            for (row, out) in v_bar.iter_mut().enumerate() {
                *out = factor
                    .iter()
                    .zip(&r)
                    .map(|(&(col, s), rv)| vectors[(row, col)] * s * rv)
                    .sum();
            }
            if v_bar[n - 1] != Complex64::new(0.0, 0.0) {
                break;
            }
            attempts += 1;
            if attempts >= MAX_REDRAWS {
                return Err(Error::Numerical(
                    "randomization keeps producing a zero last entry".into(),
                ));
            }
        }
        let t = v_bar[n - 1];
        // Lifted entries are e^{-jθ}.
        let phases = PhaseConfig::new(v_bar[..n - 1].iter().map(|z| -(z / t).arg()).collect());
        let objective = problem.objective(&phases);
        if best.as_ref().is_none_or(|b| objective > b.objective) {
            best = Some(Extraction { phases, objective });
        }
    }
    Ok(best.expect("n_candidates >= 1"))
}
