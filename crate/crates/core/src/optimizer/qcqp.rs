use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::phase::PhaseConfig;
use crate::error::{Error, Result};
use crate::linalg;
use crate::serde_mat;

/// Unit-modulus QCQP `max ‖q^H χ + d‖²` in homogenized form
/// `max v^H C v`, `v = [q; t]`, `|v_n| = 1`.
///
/// The lifted vector stores `q_n = e^{-jθ_n}`, so that `q^H χ = f Φ G`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QcqpProblem {
    /// `diag(f) G`, `N_s × K`.
    #[serde(with = "serde_mat::matrix")]
    pub chi: Mat<Complex64>,
    #[serde(with = "serde_mat::vector")]
    pub d: Vec<Complex64>,
    /// `[[χχ^H, χd^H], [dχ^H, ‖d‖²]]`, `(N_s+1) × (N_s+1)`.
    #[serde(with = "serde_mat::matrix")]
    pub c_matrix: Mat<Complex64>,
}

/// Assembles the homogenized QCQP for the joint phase design.
pub fn build_qcqp(f: &[Complex64], g: &Mat<Complex64>, d: &[Complex64]) -> Result<QcqpProblem> {
    if g.nrows() != f.len() || g.ncols() != d.len() {
        return Err(Error::invalid(format!(
            "inconsistent dimensions: f has {} entries, G is {}x{}, d has {} entries",
            f.len(),
            g.nrows(),
            g.ncols(),
            d.len()
        )));
    }
    let chi = Mat::from_fn(g.nrows(), g.ncols(), |n, k| f[n] * g[(n, k)]);
    let c_matrix = assemble(&chi, d);
    Ok(QcqpProblem {
        chi,
        d: d.to_vec(),
        c_matrix,
    })
}

/// `W = [χ; d]` so that `C = W W^H`.
fn factor_of(chi: &Mat<Complex64>, d: &[Complex64]) -> Mat<Complex64> {
    let n_s = chi.nrows();
    Mat::from_fn(n_s + 1, chi.ncols(), |i, k| {
        if i < n_s {
            chi[(i, k)]
        } else {
            d[k]
        }
    })
}

fn assemble(chi: &Mat<Complex64>, d: &[Complex64]) -> Mat<Complex64> {
    let w = factor_of(chi, d);
    let mut c = &w * w.adjoint();
    linalg::hermitize(&mut c);
    c
}

impl QcqpProblem {
    pub fn n_elements(&self) -> usize {
        self.chi.nrows()
    }

    pub fn n_users(&self) -> usize {
        self.chi.ncols()
    }

    /// Factor `W` with `C = W W^H`.
    pub fn factor(&self) -> Mat<Complex64> {
        factor_of(&self.chi, &self.d)
    }

    /// Checks the structural invariants, e.g. after deserialization.
    pub fn validate(&self) -> Result<()> {
        let n = self.chi.nrows() + 1;
        if self.d.len() != self.chi.ncols() {
            return Err(Error::invalid(
                "length of d differs from the column count of chi",
            ));
        }
        if self.c_matrix.nrows() != n || self.c_matrix.ncols() != n {
            return Err(Error::invalid(format!("C must be {n}x{n}")));
        }
        let expected = assemble(&self.chi, &self.d);
        let scale = linalg::max_abs(expected.as_ref()).max(f64::MIN_POSITIVE);
        if linalg::frobenius_diff(expected.as_ref(), self.c_matrix.as_ref())
            > 1e-9 * scale * n as f64
        {
            return Err(Error::invalid("C does not match chi and d"));
        }
        Ok(())
    }

    /// `‖f Φ G + d‖²` for the given phases.
    pub fn objective(&self, phases: &PhaseConfig) -> f64 {
        assert_eq!(
            phases.len(),
            self.n_elements(),
            "phase configuration length mismatch"
        );
        let coeffs = phases.coefficients();
        (0..self.n_users())
            .map(|k| {
                let s: Complex64 = coeffs
                    .iter()
                    .enumerate()
                    .map(|(n, q)| q * self.chi[(n, k)])
                    .sum();
                (s + self.d[k]).norm_sqr()
            })
            .sum()
    }

    /// `‖t q^H χ + d‖²` for an arbitrary lifted point.
    pub fn homogenized_objective(&self, q: &[Complex64], t: Complex64) -> f64 {
        assert_eq!(q.len(), self.n_elements());
        (0..self.n_users())
            .map(|k| {
                let s: Complex64 = q
                    .iter()
                    .enumerate()
                    .map(|(n, qn)| qn.conj() * self.chi[(n, k)])
                    .sum();
                (t * s + self.d[k]).norm_sqr()
            })
            .sum()
    }

    /// The lifted vector `[e^{-jθ_1}, …, e^{-jθ_N}, 1]`.
    pub fn lift(phases: &PhaseConfig) -> Vec<Complex64> {
        phases
            .coefficients()
            .into_iter()
            .map(|q| q.conj())
            .chain(std::iter::once(Complex64::new(1.0, 0.0)))
            .collect()
    }
}
