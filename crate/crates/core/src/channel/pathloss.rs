//! Large-scale path-loss models.
//!
//! UE links use the three-slope COST-231 Hata model common in cell-free
//! massive MIMO studies; distances enter the formula in kilometres. The
//! BS–RIS link is line-of-sight and follows a reference-distance power law.

use super::config::ScenarioConfig;
use crate::error::{Error, Result};

/// COST-231 Hata constant `L` in dB for the configured carrier and heights.
pub fn hata_constant_db(config: &ScenarioConfig) -> f64 {
    let f_mhz = (config.carrier_ghz * 1e3).log10();
    let h_bs = config.bs_height_m;
    let h_ue = config.ue_height_m;
    46.3 + 33.9 * f_mhz - 13.82 * h_bs.log10() - (1.1 * f_mhz - 0.7) * h_ue + (1.56 * f_mhz - 0.8)
}

/// Average channel gain in dB (a negative number) at `distance_m`.
///
/// ```text
/// d > d1:        -L - 35 log10(d)
/// d0 < d <= d1:  -L - 15 log10(d1) - 20 log10(d)
/// d <= d0:       -L - 15 log10(d1) - 20 log10(d0)
/// ```
pub fn path_loss_three_slope(distance_m: f64, config: &ScenarioConfig) -> Result<f64> {
    if !(distance_m > 0.0) || !distance_m.is_finite() {
        return Err(Error::invalid(format!(
            "distance must be positive, got {distance_m} m"
        )));
    }
    Ok(three_slope_db(distance_m, config))
}

pub(crate) fn three_slope_db(distance_m: f64, config: &ScenarioConfig) -> f64 {
    let l = hata_constant_db(config);
    let d = distance_m / 1000.0;
    let d0 = config.breakpoints_m[0] / 1000.0;
    let d1 = config.breakpoints_m[1] / 1000.0;
    if d > d1 {
        -l - 35.0 * d.log10()
    } else if d > d0 {
        -l - 15.0 * d1.log10() - 20.0 * d.log10()
    } else {
        -l - 15.0 * d1.log10() - 20.0 * d0.log10()
    }
}

/// Linear average power gain of the LOS BS–RIS link,
/// `10^(L0/10) · d^(-alpha)` with `L0` the loss at 1 m.
pub fn ris_link_gain(distance_m: f64, config: &ScenarioConfig) -> Result<f64> {
    if !(distance_m >= 1.0) || !distance_m.is_finite() {
        return Err(Error::invalid(format!(
            "BS-RIS distance {distance_m} m is below the 1 m reference distance"
        )));
    }
    Ok(10f64.powf(config.ris_pathloss_ref_db / 10.0) * distance_m.powf(-config.ris_pathloss_exp))
}
