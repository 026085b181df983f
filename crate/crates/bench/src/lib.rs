//! Shared fixtures for the criterion benches.

use ris_core::channel::generate_realization;
use ris_core::optimizer::{build_qcqp, QcqpProblem};
use ris_core::{ChannelRealization, ScenarioConfig};

pub fn realization(n_elements: usize, n_users: usize, seed: u64) -> ChannelRealization {
    let cfg = ScenarioConfig::default()
        .with_elements(n_elements)
        .with_users(n_users);
    generate_realization(&cfg, seed).expect("default scenario is valid")
}

pub fn problem(n_elements: usize, n_users: usize, seed: u64) -> QcqpProblem {
    let r = realization(n_elements, n_users, seed);
    build_qcqp(&r.f, &r.g_matrix, &r.d).expect("realization is consistent")
}
