//! Information-theoretic rates of the uplink multiple-access channel.
//!
//! All rates are in bit/s/Hz. With equal per-user power `P` and noise
//! power `σ²`, the capacity region is the polyhedron cut out by
//! `Σ_{k∈S} R_k ≤ log2(1 + Σ_{k∈S} |h_k|² P / σ²)` for every non-empty
//! user subset `S`.

use num_complex::Complex64;

use crate::channel::{ChannelRealization, FullChannelRealization};
use crate::error::{Error, Result};
use crate::optimizer::PhaseConfig;

/// Largest user count accepted by [`region_constraints`].
pub const MAX_REGION_USERS: usize = 20;

/// Effective channel of one user: scalar for the reduced model, a vector
/// over BS antennas for the full model.
#[derive(Debug, Clone, PartialEq)]
pub enum EffectiveChannel {
    Scalar(Complex64),
    Vector(Vec<Complex64>),
}

impl EffectiveChannel {
    /// `|h|²` or `‖h‖²`.
    pub fn gain(&self) -> f64 {
        match self {
            EffectiveChannel::Scalar(h) => h.norm_sqr(),
            EffectiveChannel::Vector(h) => h.iter().map(|z| z.norm_sqr()).sum(),
        }
    }
}

/// Effective channels `f Φ g_k + d_k` of every user in the reduced model.
pub fn effective_channels(
    realization: &ChannelRealization,
    phases: &PhaseConfig,
) -> Result<Vec<EffectiveChannel>> {
    check_phase_len(realization.n_elements(), phases)?;
    let reflected = reflected_row(realization, phases);
    Ok(reflected
        .into_iter()
        .zip(&realization.d)
        .map(|(r, d)| EffectiveChannel::Scalar(r + d))
        .collect())
}

/// Effective channel vectors `h_k = F Φ g_k + d_k` of the multi-antenna model.
pub fn effective_channels_full(
    full: &FullChannelRealization,
    phases: &PhaseConfig,
) -> Result<Vec<EffectiveChannel>> {
    let n_s = full.f_matrix.ncols();
    check_phase_len(n_s, phases)?;
    let coeffs = phases.coefficients();
    let g = &full.reduced.g_matrix;
    let n_b = full.f_matrix.nrows();
    Ok((0..g.ncols())
        .map(|k| {
            let h = (0..n_b)
                .map(|r| {
                    let mut acc = full.d_matrix[(r, k)];
                    for n in 0..n_s {
                        acc += full.f_matrix[(r, n)] * coeffs[n] * g[(n, k)];
                    }
                    acc
                })
                .collect();
            EffectiveChannel::Vector(h)
        })
        .collect())
}

fn check_phase_len(n_s: usize, phases: &PhaseConfig) -> Result<()> {
    if phases.len() != n_s {
        return Err(Error::invalid(format!(
            "phase configuration has {} entries for {} RIS elements",
            phases.len(),
            n_s
        )));
    }
    Ok(())
}

/// Row vector `f Φ G`, one entry per user.
pub(crate) fn reflected_row(
    realization: &ChannelRealization,
    phases: &PhaseConfig,
) -> Vec<Complex64> {
    let coeffs = phases.coefficients();
    let g = &realization.g_matrix;
    let fq: Vec<Complex64> = realization
        .f
        .iter()
        .zip(&coeffs)
        .map(|(f, q)| f * q)
        .collect();
    (0..g.ncols())
        .map(|k| fq.iter().enumerate().map(|(n, a)| a * g[(n, k)]).sum())
        .collect()
}

fn check_link(power: f64, noise: f64) -> Result<()> {
    if !(noise > 0.0) {
        return Err(Error::invalid(format!(
            "noise power must be positive, got {noise}"
        )));
    }
    if !(power >= 0.0) {
        return Err(Error::invalid(format!(
            "power must be non-negative, got {power}"
        )));
    }
    Ok(())
}

fn check_gains(gains: &[f64]) -> Result<()> {
    if let Some(g) = gains.iter().find(|g| !(**g >= 0.0) || !g.is_finite()) {
        return Err(Error::invalid(format!(
            "channel gains must be finite and non-negative, got {g}"
        )));
    }
    Ok(())
}

/// `log2(1 + g P / σ²)`.
pub fn single_user_bound(h_gain: f64, power: f64, noise: f64) -> Result<f64> {
    check_link(power, noise)?;
    check_gains(&[h_gain])?;
    Ok(rate(h_gain, power, noise))
}

#[inline]
pub(crate) fn rate(gain: f64, power: f64, noise: f64) -> f64 {
    (gain * power / noise).ln_1p() / std::f64::consts::LN_2
}

/// One face of the capacity region.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRegionConstraint {
    /// 0-based user indices in ascending order.
    pub subset: Vec<usize>,
    pub bound_bps_hz: f64,
}

/// Enumerates all `2^K − 1` subset constraints, ordered by the bitmask of
/// the subset (`{0}`, `{1}`, `{0,1}`, ...).
pub fn region_constraints(
    h_gains: &[f64],
    power: f64,
    noise: f64,
) -> Result<Vec<RateRegionConstraint>> {
    check_link(power, noise)?;
    check_gains(h_gains)?;
    let k = h_gains.len();
    if k > MAX_REGION_USERS {
        return Err(Error::SizeLimit {
            what: "users in capacity-region enumeration",
            value: k as u128,
            limit: MAX_REGION_USERS as u128,
        });
    }
    Ok((1u32..(1u32 << k))
        .map(|mask| {
            let subset: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
            let total: f64 = subset.iter().map(|&i| h_gains[i]).sum();
            RateRegionConstraint {
                subset,
                bound_bps_hz: rate(total, power, noise),
            }
        })
        .collect())
}

/// Sum capacity with equal per-user power: `log2(1 + Σ g_k P / σ²)`.
pub fn sum_capacity(h_gains: &[f64], power: f64, noise: f64) -> Result<f64> {
    check_link(power, noise)?;
    check_gains(h_gains)?;
    Ok(rate(h_gains.iter().sum(), power, noise))
}

/// Sum capacity with per-user powers, `log2(1 + Σ g_k P_k / σ²)`.
pub fn sum_capacity_weighted(h_gains: &[f64], powers: &[f64], noise: f64) -> Result<f64> {
    if h_gains.len() != powers.len() {
        return Err(Error::invalid("gain and power vectors differ in length"));
    }
    check_gains(h_gains)?;
    for &p in powers {
        check_link(p, noise)?;
    }
    let snr: f64 = h_gains.iter().zip(powers).map(|(g, p)| g * p).sum();
    Ok(rate(snr, 1.0, noise))
}

/// Both sides of the gain-equivalence identity: the per-user sum
/// `Σ_k |f Φ g_k + d_k|²` and the squared norm of the stacked row vector
/// `f Φ G + d`, computed along separate paths.
pub fn gain_equivalence_check(
    realization: &ChannelRealization,
    phases: &PhaseConfig,
) -> Result<(f64, f64)> {
    let lhs: f64 = effective_channels(realization, phases)?
        .iter()
        .map(EffectiveChannel::gain)
        .sum();

    let coeffs = phases.coefficients();
    let g = &realization.g_matrix;
    let mut row = realization.d.clone();
    for n in 0..realization.n_elements() {
        let fq = realization.f[n] * coeffs[n];
        for (k, entry) in row.iter_mut().enumerate() {
            *entry += fq * g[(n, k)];
        }
    }
    let rhs = row.iter().map(|z| z.re * z.re + z.im * z.im).sum();
    Ok((lhs, rhs))
}
