//! Thin helpers over faer for the Hermitian matrices used by the SDP code.

use faer::{Mat, MatRef, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub(crate) fn hermitian_eigen(m: MatRef<'_, Complex64>) -> Result<(Vec<f64>, Mat<Complex64>)> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("Hermitian eigendecomposition failed: {e:?}")))?;
    let s = evd.S().column_vector();
    let values = (0..m.nrows()).map(|i| s[i].re).collect();
    Ok((values, evd.U().to_owned()))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub(crate) fn min_eigenvalue(m: MatRef<'_, Complex64>) -> Result<f64> {
    if m.nrows() == 0 {
        return Ok(0.0);
    }
    let values = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numerical(format!("Hermitian eigenvalue computation failed: {e:?}")))?;
    Ok(values[0])
}

/// Largest eigenvalue of a Hermitian matrix.
pub(crate) fn max_eigenvalue(m: MatRef<'_, Complex64>) -> Result<f64> {
    if m.nrows() == 0 {
        return Ok(0.0);
    }
    let values = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numerical(format!("Hermitian eigenvalue computation failed: {e:?}")))?;
    Ok(values[values.len() - 1])
}

/// `Q diag(max(w, 0)) Q^H` from an eigendecomposition.
pub(crate) fn psd_part(values: &[f64], vectors: MatRef<'_, Complex64>) -> Mat<Complex64> {
    let n = vectors.nrows();
    let keep: Vec<usize> = (0..values.len()).filter(|&i| values[i] > 0.0).collect();
    if keep.is_empty() {
        return Mat::zeros(n, n);
    }
    let b = Mat::from_fn(n, keep.len(), |r, c| {
        vectors[(r, keep[c])] * values[keep[c]].sqrt()
    });
    &b * b.adjoint()
}

/// Projection onto the PSD cone (Frobenius norm).
pub(crate) fn project_psd(m: MatRef<'_, Complex64>) -> Result<Mat<Complex64>> {
    let (values, vectors) = hermitian_eigen(m)?;
    Ok(psd_part(&values, vectors.as_ref()))
}

pub(crate) fn is_hermitian(m: MatRef<'_, Complex64>, tol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let scale = max_abs(m).max(1.0);
    (0..m.nrows())
        .all(|i| (i..m.ncols()).all(|j| (m[(i, j)] - m[(j, i)].conj()).norm() <= tol * scale))
}

/// Replaces `m` by `(m + m^H) / 2`.
pub(crate) fn hermitize(m: &mut Mat<Complex64>) {
    let n = m.nrows();
    for i in 0..n {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
}

pub(crate) fn max_abs(m: MatRef<'_, Complex64>) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            best = best.max(m[(i, j)].norm());
        }
    }
    best
}

pub(crate) fn frobenius_diff(a: MatRef<'_, Complex64>, b: MatRef<'_, Complex64>) -> f64 {
    let mut acc = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            acc += (a[(i, j)] - b[(i, j)]).norm_sqr();
        }
    }
    acc.sqrt()
}

/// `Re Tr(A B)` for Hermitian `A`, `B`.
pub(crate) fn trace_product(a: MatRef<'_, Complex64>, b: MatRef<'_, Complex64>) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for j in 0..n {
        for i in 0..n {
            // Tr(AB) = Σ_ij A_ij B_ji
            let (x, y) = (a[(i, j)], b[(j, i)]);
            acc += x.re * y.re - x.im * y.im;
        }
    }
    acc
}

/// Quadratic form `v^H M v` (real part).
#[cfg(test)]
pub(crate) fn quad_form(m: MatRef<'_, Complex64>, v: &[Complex64]) -> f64 {
    let n = v.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let mut col = Complex64::new(0.0, 0.0);
        for i in 0..n {
            col += v[i].conj() * m[(i, j)];
        }
        acc += col * v[j];
    }
    acc.re
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Mat<Complex64> {
        let a = Mat::from_fn(5, 5, |i, j| {
            Complex64::new((i * 3 + j) as f64 % 7.0 - 3.0, (i as f64 - j as f64) * 0.5)
        });
        let mut h = &a + a.adjoint();
        hermitize(&mut h);
        h
    }

    #[test]
    fn eigen_reconstructs() {
        let h = sample();
        let (w, q) = hermitian_eigen(h.as_ref()).unwrap();
        assert!(w.windows(2).all(|p| p[0] <= p[1]));
        let d = Mat::from_fn(5, 5, |i, j| {
            if i == j {
                Complex64::new(w[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let back = &q * &d * q.adjoint();
        assert!(frobenius_diff(back.as_ref(), h.as_ref()) < 1e-12);
    }

    #[test]
    fn psd_projection_is_psd_and_idempotent() {
        let h = sample();
        let p = project_psd(h.as_ref()).unwrap();
        assert!(min_eigenvalue(p.as_ref()).unwrap() > -1e-12);
        let pp = project_psd(p.as_ref()).unwrap();
        assert!(frobenius_diff(p.as_ref(), pp.as_ref()) < 1e-10);
        assert!(is_hermitian(p.as_ref(), 1e-12));
    }

    #[test]
    fn trace_and_quad_form_agree_on_rank_one() {
        let h = sample();
        let v: Vec<Complex64> = (0..5)
            .map(|i| Complex64::from_polar(1.0, i as f64))
            .collect();
        let vv = Mat::from_fn(5, 5, |i, j| v[i] * v[j].conj());
        assert!((trace_product(h.as_ref(), vv.as_ref()) - quad_form(h.as_ref(), &v)).abs() < 1e-12);
    }
}
