use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in the 2-D cell layout, meters.
pub type Position = [f64; 2];

/// Geometry, link budget and fading parameters of one simulation scenario.
///
/// Every field is optional in the JSON form; missing fields take the
/// defaults below. Unknown keys are rejected.
///
/// Default layout: the cell is `[0, 500] × [0, 500]` m with the BS at the
/// origin and the RIS at `(500, 250)`. Cell-center users are uniform over
/// `[0, x2]²`, cell-edge users uniform over `[x1, x3]²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Number of RIS elements.
    pub n_elements: usize,
    pub n_users: usize,
    pub n_center_users: usize,
    pub n_edge_users: usize,
    /// Per-user transmit power, W.
    pub ue_power_watts: f64,
    pub noise_density_dbm_hz: f64,
    pub noise_figure_db: f64,
    pub bandwidth_hz: f64,
    pub carrier_ghz: f64,
    pub bs_height_m: f64,
    pub ue_height_m: f64,
    /// Log-normal shadowing standard deviation, dB.
    pub shadow_std_db: f64,
    /// Path loss of the BS–RIS link at 1 m, dB.
    pub ris_pathloss_ref_db: f64,
    pub ris_pathloss_exp: f64,
    /// LOS-to-scattered power ratio of the BS–RIS link (linear).
    pub rician_factor: f64,
    pub x1_m: f64,
    pub x2_m: f64,
    pub x3_m: f64,
    /// Inner and outer breakpoints of the three-slope model, meters.
    pub breakpoints_m: [f64; 2],
    pub bs_position: Position,
    pub ris_position: Position,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            n_elements: 200,
            n_users: 2,
            n_center_users: 1,
            n_edge_users: 1,
            ue_power_watts: 1.0,
            noise_density_dbm_hz: -174.0,
            noise_figure_db: 9.0,
            bandwidth_hz: 1.0e6,
            carrier_ghz: 1.9,
            bs_height_m: 15.0,
            ue_height_m: 1.65,
            shadow_std_db: 8.0,
            ris_pathloss_ref_db: -30.0,
            ris_pathloss_exp: 2.0,
            rician_factor: 5.0,
            x1_m: 250.0,
            x2_m: 300.0,
            x3_m: 500.0,
            breakpoints_m: [10.0, 50.0],
            bs_position: [0.0, 0.0],
            ris_position: [500.0, 250.0],
        }
    }
}

impl ScenarioConfig {
    /// Thermal noise power over the signal bandwidth, W.
    pub fn noise_power_watts(&self) -> f64 {
        let dbm =
            self.noise_density_dbm_hz + 10.0 * self.bandwidth_hz.log10() + self.noise_figure_db;
        10f64.powf((dbm - 30.0) / 10.0)
    }

    /// Sets the user count, splitting it as `ceil(K/2)` center and
    /// `floor(K/2)` edge users.
    pub fn with_users(mut self, n_users: usize) -> Self {
        self.n_users = n_users;
        self.n_center_users = n_users.div_ceil(2);
        self.n_edge_users = n_users / 2;
        self
    }

    pub fn with_elements(mut self, n_elements: usize) -> Self {
        self.n_elements = n_elements;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_elements == 0 {
            return Err(Error::invalid("n_elements must be at least 1"));
        }
        if self.n_users == 0 {
            return Err(Error::invalid("n_users must be at least 1"));
        }
        if self.n_center_users + self.n_edge_users != self.n_users {
            return Err(Error::invalid(format!(
                "n_center_users ({}) + n_edge_users ({}) must equal n_users ({})",
                self.n_center_users, self.n_edge_users, self.n_users
            )));
        }
        if !(self.ue_power_watts > 0.0 && self.ue_power_watts.is_finite()) {
            return Err(Error::invalid("ue_power_watts must be positive and finite"));
        }
        if !(self.rician_factor >= 0.0) {
            return Err(Error::invalid("rician_factor must be non-negative"));
        }
        if !(self.x1_m < self.x3_m) {
            return Err(Error::invalid("x1_m must be smaller than x3_m"));
        }
        if !(self.x2_m > 0.0) {
            return Err(Error::invalid("x2_m must be positive"));
        }
        let [d0, d1] = self.breakpoints_m;
        if !(d0 > 0.0 && d0 < d1) {
            return Err(Error::invalid("breakpoints must satisfy 0 < d0 < d1"));
        }
        if !(self.shadow_std_db >= 0.0) {
            return Err(Error::invalid("shadow_std_db must be non-negative"));
        }
        if !(self.carrier_ghz > 0.0 && self.bs_height_m > 0.0 && self.ue_height_m > 0.0) {
            return Err(Error::invalid(
                "carrier frequency and antenna heights must be positive",
            ));
        }
        let noise = self.noise_power_watts();
        if !(noise > 0.0 && noise.is_finite()) {
            return Err(Error::invalid(format!(
                "derived noise power {noise} W is not positive"
            )));
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s).map_err(|e| Error::Json {
            path: "<string>".into(),
            source: e,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: Self = serde_json::from_str(&text).map_err(|e| Error::Json {
            path: path.to_path_buf(),
            source: e,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }
}
