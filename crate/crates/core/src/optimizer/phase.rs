use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// RIS phase shifts `θ_n`, stored as angles in `[0, 2π)`.
///
/// Reflection coefficients are always built as `e^{jθ_n}`, so every
/// configuration is unit-modulus by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseConfig {
    theta: Vec<f64>,
}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl PhaseConfig {
    pub fn new(theta: Vec<f64>) -> Self {
        Self {
            theta: theta.into_iter().map(wrap_angle).collect(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            theta: vec![0.0; n],
        }
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// Reflection coefficients `e^{jθ_n}`.
    pub fn coefficients(&self) -> Vec<Complex64> {
        self.theta
            .iter()
            .map(|&t| Complex64::from_polar(1.0, t))
            .collect()
    }
}

fn phase_of(z: Complex64) -> f64 {
    if z == Complex64::new(0.0, 0.0) {
        0.0
    } else {
        z.arg()
    }
}

/// Phase shifts that co-phase every reflected path of user `k` with its
/// direct path: `θ_n = arg(d_k) − arg(f_n g_{n,k})`.
///
/// Elements with `f_n g_{n,k} = 0` get `θ_n = 0`; `d_k = 0` aligns to phase 0.
pub fn align_phases(f: &[Complex64], g_k: &[Complex64], d_k: Complex64) -> PhaseConfig {
    assert_eq!(f.len(), g_k.len(), "f and g_k differ in length");
    let reference = phase_of(d_k);
    PhaseConfig::new(
        f.iter()
            .zip(g_k)
            .map(|(f, g)| {
                let cascade = f * g;
                if cascade == Complex64::new(0.0, 0.0) {
                    0.0
                } else {
                    reference - cascade.arg()
                }
            })
            .collect(),
    )
}

/// `Σ_n f_n e^{jθ_n} g_{n,k} + d_k`.
pub fn effective_channel(
    f: &[Complex64],
    phases: &PhaseConfig,
    g_k: &[Complex64],
    d_k: Complex64,
) -> Complex64 {
    assert_eq!(f.len(), g_k.len(), "f and g_k differ in length");
    assert_eq!(f.len(), phases.len(), "phase configuration length mismatch");
    f.iter()
        .zip(phases.theta())
        .zip(g_k)
        .fold(d_k, |acc, ((f, &t), g)| {
            acc + f * Complex64::from_polar(1.0, t) * g
        })
}
