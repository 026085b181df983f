//! Solvers for the semidefinite relaxation
//!
//! ```text
//! max  Tr(C V)   s.t.  V_nn = 1,  V ⪰ 0
//! ```
//!
//! Both backends return a primal point that is feasible by construction
//! (unit diagonal, PSD) together with a dual bound `Σ y_n` for a `y`
//! with `Diag(y) − C ⪰ 0`, so the reported duality gap is a certificate
//! of optimality independent of how the primal point was found.

mod admm;
mod lowrank;

use faer::{Mat, MatRef};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::qcqp::QcqpProblem;
use crate::error::{Error, Result};
use crate::linalg;
use crate::serde_mat;

/// Solver backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SdpMethod {
    /// ADMM on the full matrix: alternating projections onto the
    /// unit-diagonal affine set and the PSD cone.
    Admm,
    /// Block-coordinate ascent on a factorization `V = X X^H` with
    /// unit-norm rows of `X`.
    #[default]
    LowRank,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SdpOptions {
    /// Target relative duality gap.
    pub tol: f64,
    /// ADMM iterations or low-rank sweeps.
    pub max_iter: usize,
    pub method: SdpMethod,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 5000,
            method: SdpMethod::LowRank,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdpSolution {
    /// Primal point; Hermitian PSD with unit diagonal.
    #[serde(with = "serde_mat::matrix")]
    pub v_matrix: Mat<Complex64>,
    /// `Tr(C V)`.
    pub objective: f64,
    /// Certified upper bound on the optimal value.
    pub dual_bound: f64,
    /// `dual_bound − objective`.
    pub duality_gap: f64,
    /// Gap relative to `max(|objective|, max_ij |C_ij|)`.
    pub relative_gap: f64,
    pub iterations: usize,
    /// Whether `relative_gap <= tol` was reached.
    pub certified: bool,
}

/// Solves the relaxation of a QCQP built by [`super::build_qcqp`].
///
/// The low-rank backend works with the factor `C = W W^H` directly.
pub fn solve_sdp(problem: &QcqpProblem, options: &SdpOptions) -> Result<SdpSolution> {
    let factor = problem.factor();
    solve_impl(problem.c_matrix.as_ref(), Some(factor.as_ref()), options)
}

/// Solves the relaxation for an arbitrary Hermitian `C`.
pub fn solve_sdp_hermitian(c: MatRef<'_, Complex64>, options: &SdpOptions) -> Result<SdpSolution> {
    solve_impl(c, None, options)
}

fn solve_impl(
    c: MatRef<'_, Complex64>,
    factor: Option<MatRef<'_, Complex64>>,
    options: &SdpOptions,
) -> Result<SdpSolution> {
    if !(options.tol > 0.0) {
        return Err(Error::invalid("solver tolerance must be positive"));
    }
    if c.nrows() != c.ncols() {
        return Err(Error::invalid("C must be square"));
    }
    if !linalg::is_hermitian(c, 1e-12) {
        return Err(Error::invalid("C must be Hermitian"));
    }
    let n = c.nrows();
    let scale = linalg::max_abs(c);
    if n == 0 || scale == 0.0 {
        // Constant objective: any feasible point is optimal.
        let v = Mat::from_fn(n, n, |i, j| if i == j { one() } else { zero() });
        return Ok(SdpSolution {
            v_matrix: v,
            objective: 0.0,
            dual_bound: 0.0,
            duality_gap: 0.0,
            relative_gap: 0.0,
            iterations: 0,
            certified: true,
        });
    }
    let cs = Mat::from_fn(n, n, |i, j| c[(i, j)] / scale);
    let raw = match options.method {
        SdpMethod::Admm => admm::solve(cs.as_ref(), options)?,
        SdpMethod::LowRank => {
            let ws =
                factor.map(|w| Mat::from_fn(w.nrows(), w.ncols(), |i, j| w[(i, j)] / scale.sqrt()));
            lowrank::solve(cs.as_ref(), ws.as_ref().map(|w| w.as_ref()), options)?
        }
    };
    let gap = (raw.dual - raw.primal).max(0.0);
    let relative_gap = gap / raw.primal.abs().max(1.0);
    Ok(SdpSolution {
        v_matrix: raw.v,
        objective: raw.primal * scale,
        dual_bound: raw.dual * scale,
        duality_gap: gap * scale,
        relative_gap,
        iterations: raw.iterations,
        certified: relative_gap <= options.tol,
    })
}

/// Output of a backend on the normalized problem.
struct RawSolution {
    v: Mat<Complex64>,
    primal: f64,
    dual: f64,
    iterations: usize,
}

#[inline]
fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

#[inline]
fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Smallest `Σ y'` over the shifted `y' = y + δ·1` that is dual feasible
/// (`Diag(y') − C ⪰ 0`), using a dense eigenvalue computation.
fn dual_bound_dense(c: MatRef<'_, Complex64>, y: &[f64]) -> Result<f64> {
    let n = c.nrows();
    let s = Mat::from_fn(n, n, |i, j| {
        let diag = if i == j { y[i] } else { 0.0 };
        Complex64::new(diag, 0.0) - c[(i, j)]
    });
    let lambda = linalg::min_eigenvalue(s.as_ref())?;
    Ok(y.iter().sum::<f64>() + n as f64 * (-lambda).max(0.0))
}

/// Dual bound for `C = W W^H` through the Schur complement: with `y > 0`,
/// `Diag(y) − W W^H ⪰ 0` iff `λ_max(W^H Diag(y)^{-1} W) ≤ 1`; otherwise
/// `y` is scaled up by that eigenvalue.
fn dual_bound_factored(w: MatRef<'_, Complex64>, y: &[f64]) -> Result<f64> {
    let n = w.nrows();
    let k = w.ncols();
    let mut y = y.to_vec();
    for i in 0..n {
        let row_norm: f64 = (0..k).map(|j| w[(i, j)].norm_sqr()).sum();
        if row_norm > 0.0 {
            y[i] = y[i].max(row_norm);
        } else {
            y[i] = y[i].max(0.0);
        }
    }
    let m = Mat::from_fn(k, k, |a, b| {
        let mut acc = zero();
        for i in 0..n {
            if y[i] > 0.0 {
                acc += w[(i, a)].conj() * w[(i, b)] / y[i];
            }
        }
        acc
    });
    let lambda = linalg::max_eigenvalue(m.as_ref())?;
    Ok(lambda.max(1.0) * y.iter().sum::<f64>())
}

/// Rescales a PSD matrix to unit diagonal, `D^{-1/2} Z D^{-1/2}`. Rows with a
/// vanishing diagonal are replaced by the corresponding identity row.
fn normalize_diagonal(z: &Mat<Complex64>) -> Mat<Complex64> {
    let n = z.nrows();
    let floor = 1e-300;
    let inv: Vec<Option<f64>> = (0..n)
        .map(|i| {
            let d = z[(i, i)].re;
            (d > floor).then(|| 1.0 / d.sqrt())
        })
        .collect();
    let mut v = Mat::from_fn(n, n, |i, j| match (inv[i], inv[j]) {
        (Some(a), Some(b)) => z[(i, j)] * (a * b),
        _ if i == j => one(),
        _ => zero(),
    });
    for i in 0..n {
        v[(i, i)] = one();
    }
    linalg::hermitize(&mut v);
    v
}
