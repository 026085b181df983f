//! Seeding contract.
//!
//! Every random quantity in the simulator is drawn from a [`ChaCha8Rng`]
//! seeded with a 64-bit value. Independent streams are derived with
//! [`mix`], a SplitMix64-based combiner, so that trial `t` of a run always
//! sees the generator `mix(master_seed, t)` no matter which thread
//! evaluates it or in which order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// The generator used throughout the crate.
pub type SimRng = ChaCha8Rng;

/// Stream tags for the sub-generators derived from a trial seed.
pub mod stream {
    pub const CHANNEL: u64 = 0x6368_616e;
    pub const FDMA_TARGET: u64 = 0x6664_6d61;
    pub const RPS: u64 = 0x0072_7073;
    pub const JT: u64 = 0x0000_6a74;
}

/// SplitMix64 finalizer (Steele, Lea & Flood).
#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of sub-stream `index` from `seed`.
///
/// `mix(s, i) = splitmix64(s ^ splitmix64(i))`.
#[inline]
pub fn mix(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Draws from CN(0, 1): real and imaginary parts i.i.d. N(0, 1/2).
#[inline]
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Uniform angle in [0, 2π).
#[inline]
pub fn uniform_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>() * std::f64::consts::TAU
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // First outputs of the reference SplitMix64 generator seeded with 0.
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64(0x9E37_79B9_7F4A_7C15), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn mix_separates_neighbouring_streams() {
        let a = mix(42, 0);
        let b = mix(42, 1);
        let c = mix(43, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, mix(42, 0));
    }

    #[test]
    fn complex_normal_has_unit_power() {
        let mut rng = rng_from_seed(7);
        let n = 200_000;
        let mut re2 = 0.0;
        let mut im2 = 0.0;
        for _ in 0..n {
            let z = complex_normal(&mut rng);
            re2 += z.re * z.re;
            im2 += z.im * z.im;
        }
        let (re2, im2) = (re2 / n as f64, im2 / n as f64);
        // Var of a sample second moment of N(0, 1/2): 2·(1/2)²/n.
        let se = (0.5_f64 / n as f64).sqrt();
        assert!((re2 - 0.5).abs() < 4.0 * se, "re2 = {re2}");
        assert!((im2 - 0.5).abs() < 4.0 * se, "im2 = {im2}");
    }
}
