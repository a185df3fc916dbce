//! Small dense linear-algebra helpers shared by the inversion modules.
//!
//! Matrices are nalgebra types throughout. Singular value decompositions go
//! through faer: nalgebra's SVD loses all accuracy on some nearly rank
//! deficient inputs (wrong singular vectors, residuals of order one), which
//! is exactly the regime the rank decisions here live in. Eigenvalues come
//! from faer as well; LU solves stay with nalgebra.

use faer::Mat;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

fn to_faer<T: faer::traits::ComplexField + Copy>(m: &DMatrix<T>) -> Mat<T> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Full SVD `m = U diag(s) V^T`, `s` non-increasing.
struct Svd {
    u: Mat<f64>,
    s: Vec<f64>,
    v: Mat<f64>,
}

fn svd(m: &DMatrix<f64>) -> Svd {
    let f = to_faer(m).svd().expect("SVD of a finite matrix");
    let diag = f.S().column_vector();
    Svd {
        u: f.U().to_owned(),
        s: (0..diag.nrows()).map(|i| diag[i]).collect(),
        v: f.V().to_owned(),
    }
}

/// Singular values of `m` in non-increasing order. Empty matrices have none.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv = to_faer(m).singular_values().expect("SVD of a finite matrix");
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Singular values of a complex matrix, non-increasing.
pub fn complex_singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv = to_faer(m).singular_values().expect("SVD of a finite matrix");
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Largest singular value, 0 for an empty matrix.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Number of singular values strictly above `tol_rel * sigma_max`.
///
/// Returns 0 when `sigma_max == 0`.
pub fn numeric_rank(m: &DMatrix<f64>, tol_rel: f64) -> usize {
    let sv = singular_values(m);
    match sv.first() {
        Some(&smax) if smax > 0.0 => sv.iter().filter(|&&s| s > tol_rel * smax).count(),
        _ => 0,
    }
}

/// Number of singular values strictly above an absolute `threshold`.
pub fn rank_above(m: &DMatrix<f64>, threshold: f64) -> usize {
    singular_values(m).iter().filter(|&&s| s > threshold && s > 0.0).count()
}

/// Minimum-norm least-squares solution of `m x = b`, discarding singular
/// values at or below `threshold`.
pub fn min_norm_solve(m: &DMatrix<f64>, b: &DVector<f64>, threshold: f64) -> DVector<f64> {
    let n = m.ncols();
    let mut x = DVector::zeros(n);
    if n == 0 || m.nrows() == 0 {
        return x;
    }
    let Svd { u, s, v } = svd(m);
    for (k, &sk) in s.iter().enumerate() {
        if sk <= threshold || sk == 0.0 {
            continue;
        }
        let coef = (0..m.nrows()).map(|i| u[(i, k)] * b[i]).sum::<f64>() / sk;
        for j in 0..n {
            x[j] += coef * v[(j, k)];
        }
    }
    x
}

/// Orthonormal basis of the numerical null space of `m` (columns), using
/// the same absolute `threshold` as [`rank_above`].
pub fn null_space(m: &DMatrix<f64>, threshold: f64) -> DMatrix<f64> {
    let n = m.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let Svd { s, v, .. } = svd(m);
    // columns of V past the computed singular values are null directions too
    let keep: Vec<usize> = (0..n).filter(|&k| s.get(k).is_none_or(|&sk| sk <= threshold)).collect();
    DMatrix::from_fn(n, keep.len(), |i, c| v[(i, keep[c])])
}

/// Eigenvalues of a real square matrix (complex conjugate pairs included).
pub fn real_eigenvalues(m: &DMatrix<f64>) -> Vec<Complex64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    to_faer(m).eigenvalues().expect("eigenvalues of a finite matrix")
}

/// Eigenvalues of a complex square matrix.
pub fn complex_eigenvalues(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    to_faer(m).eigenvalues().expect("eigenvalues of a finite matrix")
}

/// Infinity norm (max absolute row sum).
pub fn inf_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Outcome of a symmetric LL^T factorization attempt.
#[derive(Debug, Clone, PartialEq)]
pub enum Cholesky {
    /// All pivots cleared the threshold; carries the smallest one.
    Positive { min_pivot: f64 },
    /// Pivot `index` was at or below the threshold.
    Failed { index: usize, pivot: f64 },
}

/// Cholesky factorization of the symmetric part of `m`, declaring failure
/// as soon as a pivot (diagonal of `L` squared) drops to `pivot_tol` or below.
pub fn cholesky_attempt(m: &DMatrix<f64>, pivot_tol: f64) -> Cholesky {
    let n = m.nrows();
    let mut l = DMatrix::<f64>::zeros(n, n);
    let mut min_pivot = f64::INFINITY;
    for j in 0..n {
        let mut d = m[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > pivot_tol) {
            return Cholesky::Failed { index: j, pivot: d };
        }
        min_pivot = min_pivot.min(d);
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..n {
            let mut s = 0.5 * (m[(i, j)] + m[(j, i)]);
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Cholesky::Positive { min_pivot }
}
