//! Weights, the Vandermonde factorization of the Hankel blocks, and the
//! certificates tying positive definiteness of `A1 R` to interlaced
//! solutions with `n_x = n_y`.

use nalgebra::DMatrix;

use crate::error::{MomentError, Result};
use crate::inversion::{invert_min_degree, HigherMoments, Method};
use crate::linalg::{cholesky_attempt, inf_norm, numeric_rank, Cholesky};
use crate::structure::{build_hankel, HankelSystem};
use crate::tolerance::ToleranceSet;
use crate::transform::{exp_transform, BranchSolution, MomentSequence};

/// Relative separation below which two branch values count as repeated.
pub const SEPARATION_TOL: f64 = 1e-8;
/// Relative asymmetry tolerated in `A1 R`.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Relative pivot floor of the positive-definiteness test.
pub const PIVOT_TOL: f64 = 1e-12;

/// Distinct positive branches and their weights `q_r(x_j) / p_r'(x_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightData {
    pub xs: Vec<f64>,
    pub weights: Vec<f64>,
}

fn separation_scale(values: &[f64]) -> f64 {
    values.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()))
}

/// Smallest pairwise distance, `INFINITY` for fewer than two values.
fn min_separation(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

/// `w_j = prod_i (x_j - y_i) / prod_{i != j} (x_j - x_i)`.
pub fn weights(xs: &[f64], ys: &[f64]) -> Result<WeightData> {
    let separation = min_separation(xs);
    if separation <= SEPARATION_TOL * separation_scale(xs) {
        return Err(MomentError::RepeatedRoots { separation });
    }
    let weights = xs
        .iter()
        .enumerate()
        .map(|(j, &xj)| {
            let num: f64 = ys.iter().map(|&y| xj - y).product();
            let den: f64 = xs
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, &xi)| xj - xi)
                .product();
            num / den
        })
        .collect();
    Ok(WeightData {
        xs: xs.to_vec(),
        weights,
    })
}

/// `A1 R`: `A1` with its columns reversed.
pub fn reversed_a1(h: &HankelSystem) -> DMatrix<f64> {
    let n = h.a1.ncols();
    DMatrix::from_fn(h.a1.nrows(), n, |i, j| h.a1[(i, n - 1 - j)])
}

/// `A0 R`, where `A0` is the first `n_x` columns of `A`.
pub fn reversed_a0(h: &HankelSystem) -> DMatrix<f64> {
    let n = h.n_x;
    DMatrix::from_fn(n, n, |i, j| h.a[(i, n - 1 - j)])
}

/// `max(|A1 R - V W V^T|_inf, |A0 R - V W X V^T|_inf)` with `V` the
/// Vandermonde matrix in the weight nodes.
pub fn factorization_residual(h: &HankelSystem, wd: &WeightData) -> Result<f64> {
    let n = h.n_x;
    if wd.xs.len() != n || wd.weights.len() != n {
        return Err(MomentError::DimensionMismatch(format!(
            "{} weights for a system with n_x = {n}",
            wd.xs.len()
        )));
    }
    let v = DMatrix::from_fn(n, n, |i, j| wd.xs[j].powi(i as i32));
    let w = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&wd.weights));
    let x = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&wd.xs));
    let vw = &v * &w;
    let r1 = inf_norm(&(reversed_a1(h) - &vw * v.transpose()));
    let r0 = inf_norm(&(reversed_a0(h) - &vw * &x * v.transpose()));
    Ok(r1.max(r0))
}

/// Symmetry to `SYMMETRY_TOL` plus a Cholesky attempt with pivot floor
/// `PIVOT_TOL * |M|_inf`.
pub fn symmetric_positive_definite(m: &DMatrix<f64>) -> bool {
    if m.nrows() == 0 || m.nrows() != m.ncols() {
        return false;
    }
    let norm = inf_norm(m);
    if inf_norm(&(m - m.transpose())) > SYMMETRY_TOL * norm.max(1.0) {
        return false;
    }
    matches!(cholesky_attempt(m, PIVOT_TOL * norm), Cholesky::Positive { .. })
}

/// `y_1 < x_1 < y_2 < x_2 < ... < y_n < x_n` after sorting, each gap larger
/// than the separation tolerance.
pub fn is_interlaced(xs: &[f64], ys: &[f64]) -> bool {
    if xs.len() != ys.len() || xs.is_empty() {
        return false;
    }
    let mut xs = xs.to_vec();
    let mut ys = ys.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let chain: Vec<f64> = ys.iter().zip(&xs).flat_map(|(&y, &x)| [y, x]).collect();
    let margin = SEPARATION_TOL * separation_scale(&chain);
    chain.windows(2).all(|w| w[1] - w[0] > margin)
}

/// The `(n_x + 1) x (n_x + 1)` matrix `[a0 A1; a_{K+1} a_K .. a_{K+1-n_x}]`.
///
/// The last row continues the Toeplitz pattern of `A` one step further, so
/// that `(1, c)` is in its null space for every solution `c` of `A1 c = -a0`.
pub fn extended_matrix(h: &HankelSystem, a_next: f64, a: &[f64]) -> DMatrix<f64> {
    let n = h.n_x;
    let k = a.len() - 1;
    let mut e = DMatrix::zeros(n + 1, n + 1);
    e.view_mut((0, 0), (n, n + 1)).copy_from(&h.a);
    e[(n, 0)] = a_next;
    for j in 1..=n {
        e[(n, j)] = if k + 1 >= j { a[k + 1 - j] } else { 0.0 };
    }
    e
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovCertificate {
    /// `A1 R` is symmetric positive definite.
    pub spd: bool,
    /// Only meaningful when `interlacing_applicable`.
    pub interlaced: bool,
    /// `n_x = n_y`.
    pub interlacing_applicable: bool,
    pub extended_singular: bool,
    pub weights_positive: bool,
    /// Weights of the minimal solution, when its positive branches are distinct.
    pub weights: Option<Vec<f64>>,
    pub solution: BranchSolution,
}

pub fn markov_certificate(m: &MomentSequence, tol: &ToleranceSet) -> Result<MarkovCertificate> {
    m.check_split()?;
    let (n_x, n_y) = (m.n_x(), m.n_y());
    let higher = HigherMoments::new(m, tol)?;
    let solution = invert_min_degree(m, Method::Companion, tol)?;
    let a = exp_transform(m);

    let (spd, extended_singular) = if n_x == 0 {
        // extended matrix is [a_{K+1}] = [0]
        (false, higher.next_coefficient().abs() <= tol.rank)
    } else {
        let h = build_hankel(&a, n_x, n_y, tol.rank)?;
        let e = extended_matrix(&h, higher.next_coefficient(), a.values());
        (
            symmetric_positive_definite(&reversed_a1(&h)),
            numeric_rank(&e, tol.rank) < n_x + 1,
        )
    };

    let weights = weights(&solution.xs, &solution.ys).ok().map(|w| w.weights);
    let weights_positive = weights
        .as_ref()
        .is_some_and(|w| !w.is_empty() && w.iter().all(|&v| v > 0.0));
    let interlacing_applicable = n_x == n_y && n_x > 0;
    let interlaced = interlacing_applicable && is_interlaced(&solution.xs, &solution.ys);

    Ok(MarkovCertificate {
        spd,
        interlaced,
        interlacing_applicable,
        extended_singular,
        weights_positive,
        weights,
        solution,
    })
}

/// Left-continuous unit step, `H(0) = 0`.
fn step(s: f64) -> f64 {
    if s > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Signed indicator density `f` with `m_k = k * integral x^{k-1} f(x) dx`.
///
/// Each branch value `v` contributes `H(x) - H(x - v)`, which is
/// `sgn(v) [H(x) - H(x - |v|)]` for `v >= 0` and the indicator of `(v, 0]`
/// with a minus sign for `v < 0`. Zero branches contribute nothing.
pub fn density_eval(sol: &BranchSolution, x: f64) -> f64 {
    let branch = |v: f64| step(x) - step(x - v);
    sol.xs.iter().map(|&v| branch(v)).sum::<f64>() - sol.ys.iter().map(|&v| branch(v)).sum::<f64>()
}
