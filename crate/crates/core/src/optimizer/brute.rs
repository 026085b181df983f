use faer::Mat;
use num_complex::Complex64;

use super::phase::PhaseConfig;
use crate::error::{Error, Result};

/// Largest number of grid points [`brute_force_phases`] will evaluate.
pub const MAX_GRID_POINTS: u128 = 100_000_000;

/// Exhaustive search of `‖f Φ G + d‖²` over `θ_n ∈ {2πm / levels}`.
///
/// Points are visited in lexicographic order of the level indices and only
/// a strict improvement replaces the incumbent, so ties resolve to the
/// lexicographically smallest index vector.
pub fn brute_force_phases(
    f: &[Complex64],
    g: &Mat<Complex64>,
    d: &[Complex64],
    levels: usize,
) -> Result<(PhaseConfig, f64)> {
    if g.nrows() != f.len() || g.ncols() != d.len() {
        return Err(Error::invalid("inconsistent channel dimensions"));
    }
    if levels == 0 {
        return Err(Error::invalid("levels must be at least 1"));
    }
    let n_s = f.len();
    let k_users = d.len();
    let points = (levels as u128)
        .checked_pow(n_s as u32)
        .filter(|&p| p <= MAX_GRID_POINTS);
    if points.is_none() {
        return Err(Error::SizeLimit {
            what: "phase grid points",
            value: (levels as u128).saturating_pow(n_s as u32),
            limit: MAX_GRID_POINTS,
        });
    }

    // contrib[n][m][k] = f_n e^{j2πm/L} g_{n,k}
    let step = std::f64::consts::TAU / levels as f64;
    let contrib: Vec<Vec<Vec<Complex64>>> = (0..n_s)
        .map(|n| {
            (0..levels)
                .map(|m| {
                    let q = Complex64::from_polar(1.0, step * m as f64);
                    (0..k_users).map(|k| f[n] * q * g[(n, k)]).collect()
                })
                .collect()
        })
        .collect();

    let mut idx = vec![0usize; n_s];
    let mut best_idx = idx.clone();
    let mut best = f64::NEG_INFINITY;
    let mut row = vec![Complex64::new(0.0, 0.0); k_users];
    loop {
        row.copy_from_slice(d);
        for (n, &m) in idx.iter().enumerate() {
            for (acc, c) in row.iter_mut().zip(&contrib[n][m]) {
                *acc += c;
            }
        }
        let value: f64 = row.iter().map(|z| z.norm_sqr()).sum();
        if value > best {
            best = value;
            best_idx.copy_from_slice(&idx);
        }
        // Odometer with the last index fastest.
        let mut pos = n_s;
        loop {
            if pos == 0 {
                let phases = PhaseConfig::new(best_idx.iter().map(|&m| step * m as f64).collect());
                return Ok((phases, best));
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < levels {
                break;
            }
            idx[pos] = 0;
        }
    }
}
