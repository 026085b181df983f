use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::channel::ScenarioConfig;
use crate::error::{Error, Result};
use crate::optimizer::SdrParams;
use crate::schemes::SchemeId;

/// Everything that determines a Monte-Carlo run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub scenario: ScenarioConfig,
    pub schemes: Vec<SchemeId>,
    pub n_trials: u64,
    pub master_seed: u64,
    pub sdr: SdrParams,
    pub output_dir: PathBuf,
}

impl Default for RunSpec {
    fn default() -> Self {
        Self {
            scenario: ScenarioConfig::default(),
            schemes: SchemeId::ALL.to_vec(),
            n_trials: 1000,
            master_seed: 1,
            sdr: SdrParams::default(),
            output_dir: PathBuf::from("out"),
        }
    }
}

impl RunSpec {
    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.sdr.validate()?;
        if self.n_trials == 0 {
            return Err(Error::invalid("n_trials must be at least 1"));
        }
        if self.schemes.is_empty() {
            return Err(Error::invalid("at least one scheme is required"));
        }
        let unique: BTreeSet<_> = self.schemes.iter().collect();
        if unique.len() != self.schemes.len() {
            return Err(Error::invalid("scheme list contains duplicates"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        RunSpec::default().validate().unwrap();
    }

    #[test]
    fn rejects_duplicates_and_empty() {
        let mut spec = RunSpec {
            schemes: vec![SchemeId::DC, SchemeId::DC],
            ..RunSpec::default()
        };
        assert!(spec.validate().is_err());
        spec.schemes.clear();
        assert!(spec.validate().is_err());
        let spec = RunSpec {
            n_trials: 0,
            ..RunSpec::default()
        };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let spec = RunSpec::default();
        let text = serde_json::to_string(&spec).unwrap();
        let back: RunSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}
