//! Trigonometric moments `m_k = sum_j mu_j exp(i k lambda_j)`.
//!
//! From `2r` samples the nodes `z_j = exp(i lambda_j)` are the eigenvalues of
//! the Hankel pencil `H1 v = z H0 v` with `H0(i, j) = m_{i+j}` and
//! `H1(i, j) = m_{i+j+1}` (0-based). The amplitudes then solve the square
//! Vandermonde system on the first `r` samples.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{MomentError, Result};
use crate::linalg::{complex_eigenvalues, complex_singular_values};

#[derive(Debug, Clone, PartialEq)]
pub struct TrigSignal {
    /// Frequencies in `(-pi, pi]`.
    pub freqs: Vec<f64>,
    pub amps: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigOptions {
    /// Relative singular-value cutoff for the rank of `H0`.
    pub rank: f64,
    /// Minimum distance (radians, modulo `2 pi`) between recovered frequencies.
    pub separation: f64,
}

impl Default for TrigOptions {
    fn default() -> Self {
        Self {
            rank: 1e-9,
            separation: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrigInversion {
    pub signal: TrigSignal,
    /// Pencil eigenvalues before projection onto the unit circle.
    pub eigenvalues: Vec<Complex64>,
    /// `max_j ||z_j| - 1|`.
    pub unit_deviation: f64,
}

pub fn trig_forward(sig: &TrigSignal, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|k| {
            sig.freqs
                .iter()
                .zip(&sig.amps)
                .map(|(&lambda, &mu)| mu * Complex64::from_polar(1.0, k as f64 * lambda))
                .sum()
        })
        .collect()
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Distance between two angles on the circle.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

fn complex_rank(m: &DMatrix<Complex64>, tol_rel: f64) -> usize {
    let sv = complex_singular_values(m);
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax <= 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol_rel * smax).count()
}

pub fn trig_invert(m: &[Complex64], r: usize, opts: &TrigOptions) -> Result<TrigInversion> {
    if r == 0 || m.len() != 2 * r {
        return Err(MomentError::InvalidInput(format!(
            "{} samples given, expected 2r = {} with r >= 1",
            m.len(),
            2 * r
        )));
    }
    let h0 = DMatrix::from_fn(r, r, |i, j| m[i + j]);
    let h1 = DMatrix::from_fn(r, r, |i, j| m[i + j + 1]);
    let rank = complex_rank(&h0, opts.rank);
    if rank < r {
        return Err(MomentError::RankDeficientSignal { rank, modes: r });
    }
    let pencil = h0
        .lu()
        .solve(&h1)
        .ok_or(MomentError::RankDeficientSignal { rank, modes: r })?;
    let eigenvalues = complex_eigenvalues(&pencil);

    let unit_deviation = eigenvalues.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
    let mut freqs: Vec<f64> = eigenvalues.iter().map(|z| wrap_angle(z.arg())).collect();
    freqs.sort_by(f64::total_cmp);

    let mut separation = f64::INFINITY;
    for i in 0..freqs.len() {
        for j in (i + 1)..freqs.len() {
            separation = separation.min(circular_distance(freqs[i], freqs[j]));
        }
    }
    if separation < opts.separation {
        return Err(MomentError::IllConditionedNodes { separation });
    }

    let vander = DMatrix::from_fn(r, r, |k, j| Complex64::from_polar(1.0, k as f64 * freqs[j]));
    let rhs = nalgebra::DVector::from_column_slice(&m[..r]);
    let amps = vander
        .lu()
        .solve(&rhs)
        .ok_or(MomentError::IllConditionedNodes { separation })?;

    Ok(TrigInversion {
        signal: TrigSignal {
            freqs,
            amps: amps.iter().copied().collect(),
        },
        eigenvalues,
        unit_deviation,
    })
}
