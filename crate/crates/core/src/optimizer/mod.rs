//! RIS phase-shift optimization.
//!
//! Single-user alignment is closed form. The multi-user joint design is a
//! unit-modulus QCQP handled by semidefinite relaxation followed by
//! Gaussian randomization; [`brute_force_phases`] is the exhaustive grid
//! oracle used to check it on small instances.

mod brute;
mod phase;
mod qcqp;
mod randomize;
pub mod sdp;

use serde::{Deserialize, Serialize};

pub use brute::{brute_force_phases, MAX_GRID_POINTS};
pub use phase::{align_phases, effective_channel, wrap_angle, PhaseConfig};
pub use qcqp::{build_qcqp, QcqpProblem};
pub use randomize::{randomize_extract, Extraction};
pub use sdp::{solve_sdp, solve_sdp_hermitian, SdpMethod, SdpOptions, SdpSolution};

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};

/// Parameters of the SDR pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SdrParams {
    pub tol: f64,
    pub max_iter: usize,
    /// Gaussian randomization draws; 1 reproduces single-draw SDR.
    pub n_candidates: usize,
    pub method: SdpMethod,
}

impl Default for SdrParams {
    fn default() -> Self {
        let sdp = SdpOptions::default();
        Self {
            tol: sdp.tol,
            max_iter: sdp.max_iter,
            n_candidates: 100,
            method: sdp.method,
        }
    }
}

impl SdrParams {
    pub fn sdp_options(&self) -> SdpOptions {
        SdpOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            method: self.method,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::invalid("sdr.tol must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("sdr.max_iter must be at least 1"));
        }
        if self.n_candidates == 0 {
            return Err(Error::invalid("sdr.n_candidates must be at least 1"));
        }
        Ok(())
    }
}

/// Result of the joint-transmission phase design.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDesign {
    pub phases: PhaseConfig,
    /// `‖f Φ G + d‖²` at `phases`.
    pub objective: f64,
    /// Optimal value bound of the relaxation.
    pub sdp_objective: f64,
    pub certified: bool,
}

/// QCQP build, SDP solve and randomized extraction for one realization.
pub fn optimize_joint(
    realization: &ChannelRealization,
    params: &SdrParams,
    seed: u64,
) -> Result<JointDesign> {
    params.validate()?;
    let problem = build_qcqp(&realization.f, &realization.g_matrix, &realization.d)?;
    let solution = solve_sdp(&problem, &params.sdp_options())?;
    let extraction = randomize_extract(&solution, &problem, params.n_candidates, seed)?;
    Ok(JointDesign {
        phases: extraction.phases,
        objective: extraction.objective,
        sdp_objective: solution.objective,
        certified: solution.certified,
    })
}
