//! Per-realization sum rates of the eight transmission strategies.
//!
//! | id        | strategy                                                   |
//! |-----------|------------------------------------------------------------|
//! | DC        | direct links only, no RIS                                  |
//! | TDMA      | one slot per user, RIS re-aligned every slot               |
//! | FDMA      | one subchannel per user, RIS aligned to a random user      |
//! | FDMA_US   | FDMA with the best alignment target                        |
//! | RPS       | joint transmission with random RIS phases                  |
//! | JT        | joint transmission with SDR-optimized phases               |
//! | JT_UPPER  | joint transmission as if every user were aligned at once   |
//! | OT        | only the user with the strongest aligned channel transmits |

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::capacity::rate;
use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::optimizer::{align_phases, effective_channel, optimize_joint, PhaseConfig, SdrParams};
use crate::rng::{mix, rng_from_seed, stream, uniform_angle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SchemeId {
    DC,
    TDMA,
    FDMA,
    #[serde(rename = "FDMA_US")]
    FdmaUs,
    RPS,
    JT,
    #[serde(rename = "JT_UPPER")]
    JtUpper,
    OT,
}

impl SchemeId {
    pub const ALL: [SchemeId; 8] = [
        SchemeId::DC,
        SchemeId::TDMA,
        SchemeId::FDMA,
        SchemeId::FdmaUs,
        SchemeId::RPS,
        SchemeId::JT,
        SchemeId::JtUpper,
        SchemeId::OT,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::DC => "DC",
            SchemeId::TDMA => "TDMA",
            SchemeId::FDMA => "FDMA",
            SchemeId::FdmaUs => "FDMA_US",
            SchemeId::RPS => "RPS",
            SchemeId::JT => "JT",
            SchemeId::JtUpper => "JT_UPPER",
            SchemeId::OT => "OT",
        }
    }

    /// Schemes that use the RIS.
    pub fn uses_ris(self) -> bool {
        self != SchemeId::DC
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::invalid(format!("unknown scheme '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleFlag {
    #[default]
    Ok,
    /// The SDP solver stopped before certifying its duality gap.
    Uncertified,
}

impl SampleFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            SampleFlag::Ok => "ok",
            SampleFlag::Uncertified => "uncertified",
        }
    }
}

impl FromStr for SampleFlag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ok" | "" => Ok(SampleFlag::Ok),
            "uncertified" => Ok(SampleFlag::Uncertified),
            other => Err(Error::invalid(format!("unknown sample flag '{other}'"))),
        }
    }
}

/// Sum rate of one scheme on one trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSample {
    pub scheme: SchemeId,
    pub trial: u64,
    pub sum_rate_bps_hz: f64,
    /// 0-based index of the user the RIS (FDMA_US) or the channel (OT) is
    /// given to.
    pub selected_user: Option<usize>,
    pub flag: SampleFlag,
}

impl RateSample {
    fn new(scheme: SchemeId, sum_rate_bps_hz: f64) -> Self {
        Self {
            scheme,
            trial: 0,
            sum_rate_bps_hz,
            selected_user: None,
            flag: SampleFlag::Ok,
        }
    }

    pub fn with_trial(mut self, trial: u64) -> Self {
        self.trial = trial;
        self
    }
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

fn check_users(realization: &ChannelRealization) -> Result<()> {
    if realization.n_users() == 0 {
        return Err(Error::invalid("the realization has no users"));
    }
    Ok(())
}

/// Coherently combined magnitude `Σ_n |f_n||g_{n,k}| + |d_k|`.
pub fn aligned_gain(f: &[Complex64], g_k: &[Complex64], d_k: Complex64) -> f64 {
    assert_eq!(f.len(), g_k.len(), "f and g_k differ in length");
    f.iter()
        .zip(g_k)
        .map(|(f, g)| f.norm() * g.norm())
        .sum::<f64>()
        + d_k.norm()
}

fn aligned_gains(realization: &ChannelRealization) -> Vec<f64> {
    (0..realization.n_users())
        .map(|k| aligned_gain(&realization.f, &realization.g_column(k), realization.d[k]))
        .collect()
}

/// Lowest index attaining the maximum.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// `(1/K) Σ_k log2(1 + P a_k² / σ²)`.
pub fn rate_tdma(realization: &ChannelRealization, power: f64, noise: f64) -> Result<RateSample> {
    check_link(power, noise)?;
    check_users(realization)?;
    let a = aligned_gains(realization);
    let total: f64 = a.iter().map(|a| rate(a * a, power, noise)).sum();
    Ok(RateSample::new(SchemeId::TDMA, total / a.len() as f64))
}

fn fdma_with_target(
    realization: &ChannelRealization,
    target: usize,
    power: f64,
    noise: f64,
) -> f64 {
    let k_users = realization.n_users();
    let g_target = realization.g_column(target);
    let d_target = realization.d[target];
    let phases = align_phases(&realization.f, &g_target, d_target);
    let mut total = 0.0;
    for k in 0..k_users {
        let gain = if k == target {
            let a = aligned_gain(&realization.f, &g_target, d_target);
            a * a
        } else {
            effective_channel(
                &realization.f,
                &phases,
                &realization.g_column(k),
                realization.d[k],
            )
            .norm_sqr()
        };
        total += rate(gain, power, noise);
    }
    total / k_users as f64
}

/// FDMA with the RIS aligned to `target_user` (0-based).
pub fn rate_fdma(
    realization: &ChannelRealization,
    target_user: usize,
    power: f64,
    noise: f64,
) -> Result<RateSample> {
    check_link(power, noise)?;
    check_users(realization)?;
    if target_user >= realization.n_users() {
        return Err(Error::invalid(format!(
            "target user {target_user} out of range for {} users",
            realization.n_users()
        )));
    }
    let mut s = RateSample::new(
        SchemeId::FDMA,
        fdma_with_target(realization, target_user, power, noise),
    );
    s.selected_user = Some(target_user);
    Ok(s)
}

/// Uniformly random FDMA target drawn from `seed`.
pub fn random_target(n_users: usize, seed: u64) -> usize {
    rng_from_seed(seed).random_range(0..n_users)
}

/// FDMA with the alignment target chosen by exhaustive search.
pub fn rate_fdma_us(
    realization: &ChannelRealization,
    power: f64,
    noise: f64,
) -> Result<RateSample> {
    check_link(power, noise)?;
    check_users(realization)?;
    let rates: Vec<f64> = (0..realization.n_users())
        .map(|k| fdma_with_target(realization, k, power, noise))
        .collect();
    let best = argmax(&rates);
    let mut s = RateSample::new(SchemeId::FdmaUs, rates[best]);
    s.selected_user = Some(best);
    Ok(s)
}

fn joint_rate(
    realization: &ChannelRealization,
    phases: &PhaseConfig,
    power: f64,
    noise: f64,
) -> f64 {
    let gain: f64 = (0..realization.n_users())
        .map(|k| {
            effective_channel(
                &realization.f,
                phases,
                &realization.g_column(k),
                realization.d[k],
            )
            .norm_sqr()
        })
        .sum();
    rate(gain, power, noise)
}

/// Joint transmission with i.i.d. uniform random phases drawn from `seed`.
pub fn rate_rps(
    realization: &ChannelRealization,
    power: f64,
    noise: f64,
    seed: u64,
) -> Result<RateSample> {
    check_link(power, noise)?;
    let mut rng = rng_from_seed(seed);
    let phases = PhaseConfig::new(
        (0..realization.n_elements())
            .map(|_| uniform_angle(&mut rng))
            .collect(),
    );
    Ok(RateSample::new(
        SchemeId::RPS,
        joint_rate(realization, &phases, power, noise),
    ))
}

/// Joint transmission with SDR-designed phases,
/// `log2(1 + P ‖f Φ G + d‖² / σ²)`.
pub fn rate_jt(
    realization: &ChannelRealization,
    power: f64,
    noise: f64,
    sdr: &SdrParams,
    seed: u64,
) -> Result<RateSample> {
    check_link(power, noise)?;
    check_users(realization)?;
    let design = optimize_joint(realization, sdr, seed)?;
    let mut s = RateSample::new(SchemeId::JT, rate(design.objective, power, noise));
    if !design.certified {
        s.flag = SampleFlag::Uncertified;
    }
    Ok(s)
}

/// `log2(1 + P Σ_k a_k² / σ²)`.
pub fn rate_jt_upper(
    realization: &ChannelRealization,
    power: f64,
    noise: f64,
) -> Result<RateSample> {
    check_link(power, noise)?;
    let total: f64 = aligned_gains(realization).iter().map(|a| a * a).sum();
    Ok(RateSample::new(
        SchemeId::JtUpper,
        rate(total, power, noise),
    ))
}

/// `max_k log2(1 + P a_k² / σ²)`.
pub fn rate_ot(realization: &ChannelRealization, power: f64, noise: f64) -> Result<RateSample> {
    check_link(power, noise)?;
    check_users(realization)?;
    let a = aligned_gains(realization);
    let best = argmax(&a);
    let mut s = RateSample::new(SchemeId::OT, rate(a[best] * a[best], power, noise));
    s.selected_user = Some(best);
    Ok(s)
}

/// `log2(1 + P Σ_k |d_k|² / σ²)`.
pub fn rate_dc(realization: &ChannelRealization, power: f64, noise: f64) -> Result<RateSample> {
    check_link(power, noise)?;
    let total: f64 = realization.d.iter().map(|d| d.norm_sqr()).sum();
    Ok(RateSample::new(SchemeId::DC, rate(total, power, noise)))
}

/// Evaluates `scheme` with its random streams derived from `trial_seed`.
pub fn evaluate_scheme(
    scheme: SchemeId,
    realization: &ChannelRealization,
    power: f64,
    noise: f64,
    sdr: &SdrParams,
    trial_seed: u64,
) -> Result<RateSample> {
    match scheme {
        SchemeId::DC => rate_dc(realization, power, noise),
        SchemeId::TDMA => rate_tdma(realization, power, noise),
        SchemeId::FDMA => {
            check_users(realization)?;
            let target = random_target(realization.n_users(), mix(trial_seed, stream::FDMA_TARGET));
            rate_fdma(realization, target, power, noise)
        }
        SchemeId::FdmaUs => rate_fdma_us(realization, power, noise),
        SchemeId::RPS => rate_rps(realization, power, noise, mix(trial_seed, stream::RPS)),
        SchemeId::JT => rate_jt(realization, power, noise, sdr, mix(trial_seed, stream::JT)),
        SchemeId::JtUpper => rate_jt_upper(realization, power, noise),
        SchemeId::OT => rate_ot(realization, power, noise),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use faer::Mat;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Realization with no RIS and the given direct channels.
    fn direct_only(d: &[Complex64]) -> ChannelRealization {
        ChannelRealization::new(vec![], Mat::zeros(0, d.len()), d.to_vec()).unwrap()
    }

    #[test]
    fn scheme_names_round_trip() {
        for id in SchemeId::ALL {
            assert_eq!(id.as_str().parse::<SchemeId>().unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.as_str()));
        }
        assert!("NOMA".parse::<SchemeId>().is_err());
    }

    #[test]
    fn aligned_gain_values() {
        assert_eq!(
            aligned_gain(&[c(1.0, 0.0); 2], &[c(1.0, 0.0); 2], c(1.0, 0.0)),
            3.0
        );
        assert_eq!(
            aligned_gain(&[c(0.0, 0.0); 3], &[c(0.0, 0.0); 3], c(0.0, 0.0)),
            0.0
        );
    }

    #[test]
    fn substitution_values() {
        // Direct-only users with |d| = (1, 2) have a = (1, 2).
        let r = direct_only(&[c(1.0, 0.0), c(0.0, 2.0)]);
        let tdma = rate_tdma(&r, 1.0, 1.0).unwrap().sum_rate_bps_hz;
        assert!((tdma - (1.0 + 5f64.log2()) / 2.0).abs() < 1e-15);
        let up = rate_jt_upper(&r, 1.0, 1.0).unwrap().sum_rate_bps_hz;
        assert!((up - 6f64.log2()).abs() < 1e-15);
        let ot = rate_ot(&r, 1.0, 1.0).unwrap();
        assert!((ot.sum_rate_bps_hz - 5f64.log2()).abs() < 1e-15);
        assert_eq!(ot.selected_user, Some(1));
        let dc = rate_dc(&direct_only(&[c(1.0, 0.0), c(0.0, 1.0)]), 1.0, 1.0).unwrap();
        assert!((dc.sum_rate_bps_hz - 3f64.log2()).abs() < 1e-15);
    }

    #[test]
    fn zero_power_and_zero_direct() {
        let r = direct_only(&[c(1.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(rate_tdma(&r, 0.0, 1.0).unwrap().sum_rate_bps_hz, 0.0);
        assert_eq!(
            rate_dc(&direct_only(&[c(0.0, 0.0); 2]), 1.0, 1.0)
                .unwrap()
                .sum_rate_bps_hz,
            0.0
        );
    }

    #[test]
    fn empty_ris_rps_equals_dc() {
        let r = direct_only(&[c(0.5, 0.1), c(-1.0, 0.3)]);
        let rps = rate_rps(&r, 2.0, 0.1, 9).unwrap().sum_rate_bps_hz;
        let dc = rate_dc(&r, 2.0, 0.1).unwrap().sum_rate_bps_hz;
        assert_eq!(rps, dc);
    }

    #[test]
    fn fdma_rejects_bad_target() {
        let r = direct_only(&[c(1.0, 0.0)]);
        assert!(rate_fdma(&r, 1, 1.0, 1.0).is_err());
        assert!(rate_tdma(&r, 1.0, 0.0).is_err());
    }

    #[test]
    fn ot_ties_pick_lowest_index() {
        let r = direct_only(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]);
        assert_eq!(rate_ot(&r, 1.0, 1.0).unwrap().selected_user, Some(0));
    }

    #[test]
    fn user_selection_finds_dominant_target() {
        // User 1 (0-based) has a far stronger cascade; cross terms are
        // orthogonal in element support.
        let f = vec![c(1.0, 0.0); 4];
        let g = Mat::from_fn(4, 2, |n, k| match (n, k) {
            (0, 0) => c(0.1, 0.0),
            (1..=3, 1) => c(0.0, 5.0),
            _ => c(0.0, 0.0),
        });
        let r = ChannelRealization::new(f, g, vec![c(0.01, 0.0), c(0.01, 0.0)]).unwrap();
        let t0 = rate_fdma(&r, 0, 1.0, 1.0).unwrap().sum_rate_bps_hz;
        let t1 = rate_fdma(&r, 1, 1.0, 1.0).unwrap().sum_rate_bps_hz;
        assert!(t1 > t0);
        let us = rate_fdma_us(&r, 1.0, 1.0).unwrap();
        assert_eq!(us.selected_user, Some(1));
        assert_eq!(us.sum_rate_bps_hz, t1);
    }

    #[test]
    fn random_target_in_range_and_deterministic() {
        for seed in 0..100 {
            let t = random_target(3, seed);
            assert!(t < 3);
            assert_eq!(t, random_target(3, seed));
        }
    }

    #[test]
    fn flags_parse() {
        assert_eq!("ok".parse::<SampleFlag>().unwrap(), SampleFlag::Ok);
        assert_eq!(
            "uncertified".parse::<SampleFlag>().unwrap(),
            SampleFlag::Uncertified
        );
        assert!("bad".parse::<SampleFlag>().is_err());
    }
}
