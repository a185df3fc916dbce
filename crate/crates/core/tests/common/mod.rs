//! Test-only oracles and random instance generators.
//!
//! Everything here works from explicit branch values or polynomial
//! coefficients and never calls into the inversion path.

#![allow(dead_code)]

pub mod golden;

use num_rational::Rational64;
use rand::Rng;

/// First `count` Taylor coefficients of `num(z) / den(z)`; `den[0]` must be 1.
pub fn long_division(num: &[f64], den: &[f64], count: usize) -> Vec<f64> {
    assert_eq!(den[0], 1.0, "divisor must be normalized at the origin");
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let mut v = num.get(k).copied().unwrap_or(0.0);
        for j in 1..=k.min(den.len() - 1) {
            v -= den[j] * out[k - j];
        }
        out.push(v);
    }
    out
}

/// Ascending coefficients of `prod (1 - r z)`, written as repeated
/// convolution with `[1, -r]`.
pub fn poly_from_reciprocal_roots(roots: &[f64]) -> Vec<f64> {
    roots.iter().fold(vec![1.0], |acc, &r| convolve(&acc, &[1.0, -r]))
}

pub fn convolve(f: &[f64], g: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Exact power sums over rationals.
pub fn exact_power_sums(xs: &[i64], ys: &[i64], count: u32) -> Vec<Rational64> {
    (1..=count)
        .map(|k| {
            let p: i64 = xs.iter().map(|x| x.pow(k)).sum::<i64>() - ys.iter().map(|y| y.pow(k)).sum::<i64>();
            Rational64::from_integer(p)
        })
        .collect()
}

/// Draws `n` values in `[lo, hi]` whose pairwise distances are all at least
/// `gap`, excluding everything within `gap / 2` of each of `avoid`.
pub fn separated_values<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64, gap: f64, avoid: &[f64]) -> Vec<f64> {
    'retry: loop {
        let mut out: Vec<f64> = Vec::with_capacity(n);
        for _ in 0..n {
            let mut tries = 0;
            loop {
                tries += 1;
                if tries > 1000 {
                    continue 'retry;
                }
                let v = rng.gen_range(lo..=hi);
                if out.iter().all(|&u| (u - v).abs() >= gap) && avoid.iter().all(|&a| (a - v).abs() >= gap / 2.0) {
                    out.push(v);
                    break;
                }
            }
        }
        return out;
    }
}

/// A random well-separated instance: `n_x` positive and `n_y` negative
/// branches in `[-3, 3]`, all pairwise at least `gap` apart and at least
/// `gap / 2` away from zero.
#[derive(Debug, Clone)]
pub struct Instance {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

pub fn random_instance<R: Rng>(rng: &mut R, n_x: usize, n_y: usize, gap: f64) -> Instance {
    let all = separated_values(rng, n_x + n_y, -3.0, 3.0, gap, &[0.0]);
    Instance {
        xs: all[..n_x].to_vec(),
        ys: all[n_x..].to_vec(),
    }
}

/// Random interlaced instance `y_1 < x_1 < ... < y_n < x_n` in `[-3, 3]`
/// with consecutive gaps of at least `gap`.
pub fn random_interlaced<R: Rng>(rng: &mut R, n: usize, gap: f64) -> Instance {
    let mut all = separated_values(rng, 2 * n, -3.0, 3.0, gap, &[]);
    all.sort_by(f64::total_cmp);
    Instance {
        ys: all.iter().step_by(2).copied().collect(),
        xs: all.iter().skip(1).step_by(2).copied().collect(),
    }
}

/// Max elementwise distance between two multisets after sorting, or
/// `INFINITY` if their sizes differ.
pub fn multiset_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `|a - b|_inf / |b|_inf` (absolute when `b` vanishes).
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let scale = b.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// Naive signed power sums, summed in input order.
pub fn direct_power_sums(xs: &[f64], ys: &[f64], count: usize) -> Vec<f64> {
    (1..=count as i32)
        .map(|k| xs.iter().map(|x| x.powi(k)).sum::<f64>() - ys.iter().map(|y| y.powi(k)).sum::<f64>())
        .collect()
}
