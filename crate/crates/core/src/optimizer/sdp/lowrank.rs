//! Row-wise coordinate ascent on `V = X X^H`, `X ∈ C^{n×r}` with unit-norm
//! rows. Fixing every row but `x_i`, the objective is affine in `x_i`, so
//! the exact block update is `x_i ← g_i / ‖g_i‖` with
//! `g_i = Σ_{l≠i} C_il x_l`. For `r` above `sqrt(2n)` the non-convex
//! factorized problem has no spurious local maxima for generic `C`, and the
//! dual certificate `y_i = C_ii + ‖g_i‖` confirms optimality.
//!
//! When a factor `C = W W^H` is available, `C X` is formed as `W (W^H X)`
//! and the `K × r` product `W^H X` is updated in place after every row.

use faer::{Mat, MatRef};
use num_complex::Complex64;

use super::{dual_bound_dense, dual_bound_factored, RawSolution, SdpOptions};
use crate::error::Result;
use crate::linalg;
use crate::rng::{complex_normal, rng_from_seed};

const CHECK_EVERY: usize = 5;
const INIT_SEED: u64 = 0x6c6f_7772_616e_6b00;

fn factor_rank(n: usize) -> usize {
    let r = (2.0 * n as f64).sqrt().ceil() as usize + 1;
    r.min(n).max(1)
}

struct Factorization {
    n: usize,
    r: usize,
    /// Row-major `n × r`.
    x: Vec<Complex64>,
}

impl Factorization {
    fn random(n: usize, r: usize) -> Self {
        let mut rng = rng_from_seed(INIT_SEED);
        let mut x: Vec<Complex64> = (0..n * r).map(|_| complex_normal(&mut rng)).collect();
        for row in x.chunks_mut(r) {
            normalize(row);
        }
        Self { n, r, x }
    }

    fn row(&self, i: usize) -> &[Complex64] {
        &self.x[i * self.r..(i + 1) * self.r]
    }

    fn gram(&self) -> Mat<Complex64> {
        let mut v = Mat::from_fn(self.n, self.n, |i, j| {
            self.row(i)
                .iter()
                .zip(self.row(j))
                .map(|(a, b)| a * b.conj())
                .sum()
        });
        for i in 0..self.n {
            v[(i, i)] = Complex64::new(1.0, 0.0);
        }
        linalg::hermitize(&mut v);
        v
    }
}

fn normalize(row: &mut [Complex64]) -> bool {
    let norm = row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        row.iter_mut().for_each(|z| *z /= norm);
        true
    } else {
        false
    }
}

/// How `g_i` is computed.
enum Operator<'a> {
    Dense(MatRef<'a, Complex64>),
    Factored {
        w: MatRef<'a, Complex64>,
        /// Row-major `K × r` product `W^H X`.
        wx: Vec<Complex64>,
    },
}

impl Operator<'_> {
    fn refresh(&mut self, f: &Factorization) {
        if let Operator::Factored { w, wx } = self {
            let k = w.ncols();
            wx.clear();
            wx.resize(k * f.r, Complex64::new(0.0, 0.0));
            for i in 0..f.n {
                let xi = f.row(i);
                for a in 0..k {
                    let wc = w[(i, a)].conj();
                    for (dst, xv) in wx[a * f.r..(a + 1) * f.r].iter_mut().zip(xi) {
                        *dst += wc * xv;
                    }
                }
            }
        }
    }

    /// `g_i = (C X)_i − C_ii x_i` into `out`.
    fn gradient(&self, f: &Factorization, c_diag: &[f64], i: usize, out: &mut [Complex64]) {
        out.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        match self {
            Operator::Dense(c) => {
                for l in 0..f.n {
                    if l == i {
                        continue;
                    }
                    let cil = c[(i, l)];
                    for (o, xv) in out.iter_mut().zip(f.row(l)) {
                        *o += cil * xv;
                    }
                }
            }
            Operator::Factored { w, wx } => {
                for a in 0..w.ncols() {
                    let wia = w[(i, a)];
                    for (o, m) in out.iter_mut().zip(&wx[a * f.r..(a + 1) * f.r]) {
                        *o += wia * m;
                    }
                }
                for (o, xv) in out.iter_mut().zip(f.row(i)) {
                    *o -= c_diag[i] * xv;
                }
            }
        }
    }

    fn row_changed(&mut self, i: usize, old: &[Complex64], new: &[Complex64]) {
        if let Operator::Factored { w, wx } = self {
            let r = old.len();
            for a in 0..w.ncols() {
                let wc = w[(i, a)].conj();
                for ((dst, o), nv) in wx[a * r..(a + 1) * r].iter_mut().zip(old).zip(new) {
                    *dst += wc * (nv - o);
                }
            }
        }
    }
}

pub(super) fn solve(
    c: MatRef<'_, Complex64>,
    factor: Option<MatRef<'_, Complex64>>,
    options: &SdpOptions,
) -> Result<RawSolution> {
    let n = c.nrows();
    let r = factor_rank(n);
    let c_diag: Vec<f64> = (0..n).map(|i| c[(i, i)].re).collect();
    let mut x = Factorization::random(n, r);
    let mut op = match factor {
        Some(w) => Operator::Factored { w, wx: Vec::new() },
        None => Operator::Dense(c),
    };
    op.refresh(&x);

    let mut g = vec![Complex64::new(0.0, 0.0); r];
    let mut old = vec![Complex64::new(0.0, 0.0); r];
    let max_sweeps = options.max_iter.max(1);
    let mut result = None;

    for sweep in 1..=max_sweeps {
        for i in 0..n {
            op.gradient(&x, &c_diag, i, &mut g);
            if normalize(&mut g) {
                old.copy_from_slice(x.row(i));
                x.x[i * r..(i + 1) * r].copy_from_slice(&g);
                op.row_changed(i, &old, &g);
            }
        }

        if sweep % CHECK_EVERY == 0 || sweep == max_sweeps {
            op.refresh(&x);
            let mut y = Vec::with_capacity(n);
            let mut primal = 0.0;
            for i in 0..n {
                op.gradient(&x, &c_diag, i, &mut g);
                let norm = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let align: f64 = x
                    .row(i)
                    .iter()
                    .zip(&g)
                    .map(|(a, b)| (a.conj() * b).re)
                    .sum();
                y.push(c_diag[i] + norm);
                primal += c_diag[i] + align;
            }
            let dual = match &op {
                Operator::Factored { w, .. } => dual_bound_factored(*w, &y)?,
                Operator::Dense(c) => dual_bound_dense(*c, &y)?,
            };
            let done = dual - primal <= options.tol * primal.abs().max(1.0);
            result = Some((primal, dual, sweep));
            if done {
                break;
            }
        }
    }

    let (primal, dual, iterations) = result.expect("at least one certificate check runs");
    Ok(RawSolution {
        v: x.gram(),
        primal,
        dual,
        iterations,
    })
}
