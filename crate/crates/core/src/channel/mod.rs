//! Geometry, large-scale fading and small-scale fading.

mod config;
mod pathloss;
mod realization;

pub use config::{Position, ScenarioConfig};
pub use pathloss::{hata_constant_db, path_loss_three_slope, ris_link_gain};
pub use realization::{
    draw_user_positions, generate_full_realization, generate_realization, generate_realization_at,
    ChannelRealization, FullChannelRealization,
};
