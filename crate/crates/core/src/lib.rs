//! Link-level simulation of RIS-aided uplink multi-user MIMO.
//!
//! - [`channel`]: geometry, path loss, shadowing and fading draws.
//! - [`capacity`]: multiple-access capacity region and sum capacity.
//! - [`optimizer`]: closed-form alignment, SDR-based joint phase design and
//!   a brute-force grid oracle.
//! - [`schemes`]: sum rates of DC, TDMA, FDMA, FDMA-US, RPS, JT, the JT
//!   upper bound and opportunistic transmission.
//! - [`harness`]: seeded Monte-Carlo runs, CDF statistics and output files.

// `!(x > 0.0)` style checks are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod channel;
pub mod error;
pub mod harness;
mod linalg;
pub mod optimizer;
pub mod rng;
pub mod schemes;
mod serde_mat;

pub use channel::{ChannelRealization, FullChannelRealization, ScenarioConfig};
pub use error::{Error, Result};
pub use harness::{CdfSummary, RunSpec};
pub use optimizer::{PhaseConfig, QcqpProblem, SdpSolution, SdrParams};
pub use schemes::{RateSample, SchemeId};

pub use faer::Mat;
pub use num_complex::Complex64;
