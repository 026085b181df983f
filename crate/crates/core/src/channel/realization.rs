use faer::Mat;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::config::{Position, ScenarioConfig};
use super::pathloss::{ris_link_gain, three_slope_db};
use crate::error::{Error, Result};
use crate::rng::{complex_normal, mix, rng_from_seed, uniform_angle};

/// One draw of every channel coefficient of the reduced (reference BS
/// antenna) model.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// BS–RIS channel, length `N_s`.
    pub f: Vec<Complex64>,
    /// UE–RIS channels, `N_s × K`; column `k` is the spatial signature of
    /// user `k` at the RIS.
    pub g_matrix: Mat<Complex64>,
    /// Direct UE–BS channels, length `K`.
    pub d: Vec<Complex64>,
    pub user_positions: Vec<Position>,
}

impl ChannelRealization {
    /// Builds a realization from explicit coefficients.
    pub fn new(f: Vec<Complex64>, g_matrix: Mat<Complex64>, d: Vec<Complex64>) -> Result<Self> {
        if g_matrix.nrows() != f.len() || g_matrix.ncols() != d.len() {
            return Err(Error::invalid(format!(
                "inconsistent dimensions: f has {} entries, G is {}x{}, d has {} entries",
                f.len(),
                g_matrix.nrows(),
                g_matrix.ncols(),
                d.len()
            )));
        }
        let finite = f.iter().chain(d.iter()).all(|z| z.is_finite())
            && (0..g_matrix.ncols())
                .all(|k| (0..g_matrix.nrows()).all(|n| g_matrix[(n, k)].is_finite()));
        if !finite {
            return Err(Error::invalid("channel coefficients must be finite"));
        }
        let k = d.len();
        Ok(Self {
            f,
            g_matrix,
            d,
            user_positions: vec![[0.0, 0.0]; k],
        })
    }

    pub fn n_elements(&self) -> usize {
        self.f.len()
    }

    pub fn n_users(&self) -> usize {
        self.d.len()
    }

    /// Column `k` of `G` as an owned vector.
    pub fn g_column(&self, k: usize) -> Vec<Complex64> {
        (0..self.g_matrix.nrows())
            .map(|n| self.g_matrix[(n, k)])
            .collect()
    }
}

/// Multi-antenna extension used by the capacity analysis: `F` is
/// `N_b × N_s`, `D` is `N_b × K`, and row 0 is the reference antenna whose
/// channels form the embedded [`ChannelRealization`].
#[derive(Debug, Clone, PartialEq)]
pub struct FullChannelRealization {
    pub f_matrix: Mat<Complex64>,
    pub d_matrix: Mat<Complex64>,
    pub reduced: ChannelRealization,
}

impl FullChannelRealization {
    pub fn n_antennas(&self) -> usize {
        self.f_matrix.nrows()
    }
}

/// Draws user positions: center users uniform over `[0, x2]²`, edge users
/// uniform over `[x1, x3]²`, in that order.
pub fn draw_user_positions(config: &ScenarioConfig, seed: u64) -> Vec<Position> {
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::with_capacity(config.n_center_users + config.n_edge_users);
    for _ in 0..config.n_center_users {
        out.push([
            rng.random::<f64>() * config.x2_m,
            rng.random::<f64>() * config.x2_m,
        ]);
    }
    let span = config.x3_m - config.x1_m;
    for _ in 0..config.n_edge_users {
        out.push([
            config.x1_m + rng.random::<f64>() * span,
            config.x1_m + rng.random::<f64>() * span,
        ]);
    }
    out
}

fn distance(a: Position, b: Position) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

// Below the inner breakpoint the model is flat, so clamping the (measure
// zero) co-located case changes nothing.
const MIN_UE_DISTANCE_M: f64 = 1e-3;

/// Large-scale variance `10^((PL + S)/10)` of a UE link.
fn ue_link_variance<R: Rng + ?Sized>(
    rng: &mut R,
    from: Position,
    to: Position,
    config: &ScenarioConfig,
    shadow: &Normal<f64>,
) -> f64 {
    let dist = distance(from, to).max(MIN_UE_DISTANCE_M);
    let s = shadow.sample(rng);
    10f64.powf((three_slope_db(dist, config) + s) / 10.0)
}

/// Rician split of the BS–RIS link as `(los amplitude, scatter amplitude)`
/// for unit average power.
pub(crate) fn rician_weights(k_factor: f64) -> (f64, f64) {
    if k_factor.is_infinite() {
        (1.0, 0.0)
    } else {
        (
            (k_factor / (k_factor + 1.0)).sqrt(),
            (1.0 / (k_factor + 1.0)).sqrt(),
        )
    }
}

struct LargeScale {
    ris_gain: f64,
    departure_angle: f64,
    direct_variance: Vec<f64>,
}

fn realization_with_aux(
    config: &ScenarioConfig,
    positions: Vec<Position>,
    seed: u64,
) -> Result<(ChannelRealization, LargeScale)> {
    config.validate()?;
    if positions.len() != config.n_users {
        return Err(Error::invalid(format!(
            "{} user positions given for {} users",
            positions.len(),
            config.n_users
        )));
    }
    let n_s = config.n_elements;
    let k_users = config.n_users;
    let mut rng = rng_from_seed(seed);
    let shadow = Normal::new(0.0, config.shadow_std_db)
        .map_err(|e| Error::invalid(format!("shadowing distribution: {e}")))?;

    let mut d = Vec::with_capacity(k_users);
    let mut direct_variance = Vec::with_capacity(k_users);
    let mut g_matrix = Mat::<Complex64>::zeros(n_s, k_users);
    for (k, &pos) in positions.iter().enumerate() {
        let var_bs = ue_link_variance(&mut rng, pos, config.bs_position, config, &shadow);
        direct_variance.push(var_bs);
        d.push(complex_normal(&mut rng) * var_bs.sqrt());

        let var_ris = ue_link_variance(&mut rng, pos, config.ris_position, config, &shadow);
        let amp = var_ris.sqrt();
        for n in 0..n_s {
            g_matrix[(n, k)] = complex_normal(&mut rng) * amp;
        }
    }

    let ris_gain = ris_link_gain(distance(config.bs_position, config.ris_position), config)?;
    let (los_w, nlos_w) = rician_weights(config.rician_factor);
    let departure_angle = uniform_angle(&mut rng);
    let sin_phi = departure_angle.sin();
    let amp = ris_gain.sqrt();
    let f = (0..n_s)
        .map(|n| {
            let los = Complex64::from_polar(1.0, std::f64::consts::PI * n as f64 * sin_phi);
            (los * los_w + complex_normal(&mut rng) * nlos_w) * amp
        })
        .collect();

    Ok((
        ChannelRealization {
            f,
            g_matrix,
            d,
            user_positions: positions,
        },
        LargeScale {
            ris_gain,
            departure_angle,
            direct_variance,
        },
    ))
}

/// Draws a full realization: user positions from `mix(seed, 0)`, fading
/// and shadowing from `mix(seed, 1)`.
pub fn generate_realization(config: &ScenarioConfig, seed: u64) -> Result<ChannelRealization> {
    let positions = draw_user_positions(config, mix(seed, 0));
    generate_realization_at(config, positions, mix(seed, 1))
}

/// Draws shadowing and small-scale fading for users at fixed positions.
pub fn generate_realization_at(
    config: &ScenarioConfig,
    positions: Vec<Position>,
    seed: u64,
) -> Result<ChannelRealization> {
    realization_with_aux(config, positions, seed).map(|(r, _)| r)
}

/// Draws an `n_antennas`-antenna realization whose reference row equals
/// `generate_realization(config, seed)`. The extra BS antennas form a
/// half-wavelength linear array with a common arrival angle; scattered
/// components and direct channels are independent per antenna.
pub fn generate_full_realization(
    config: &ScenarioConfig,
    n_antennas: usize,
    seed: u64,
) -> Result<FullChannelRealization> {
    if n_antennas == 0 {
        return Err(Error::invalid("at least one BS antenna is required"));
    }
    let positions = draw_user_positions(config, mix(seed, 0));
    let (reduced, aux) = realization_with_aux(config, positions, mix(seed, 1))?;
    let n_s = reduced.n_elements();
    let k_users = reduced.n_users();
    let mut rng = rng_from_seed(mix(seed, 2));
    let (los_w, nlos_w) = rician_weights(config.rician_factor);
    let amp = aux.ris_gain.sqrt();
    let sin_dep = aux.departure_angle.sin();
    let sin_arr = uniform_angle(&mut rng).sin();

    let mut f_matrix = Mat::<Complex64>::zeros(n_antennas, n_s);
    let mut d_matrix = Mat::<Complex64>::zeros(n_antennas, k_users);
    for n in 0..n_s {
        f_matrix[(0, n)] = reduced.f[n];
    }
    for k in 0..k_users {
        d_matrix[(0, k)] = reduced.d[k];
    }
    for r in 1..n_antennas {
        for n in 0..n_s {
            let los = Complex64::from_polar(
                1.0,
                std::f64::consts::PI * (n as f64 * sin_dep + r as f64 * sin_arr),
            );
            f_matrix[(r, n)] = (los * los_w + complex_normal(&mut rng) * nlos_w) * amp;
        }
        for k in 0..k_users {
            d_matrix[(r, k)] = complex_normal(&mut rng) * aux.direct_variance[k].sqrt();
        }
    }
    Ok(FullChannelRealization {
        f_matrix,
        d_matrix,
        reduced,
    })
}
