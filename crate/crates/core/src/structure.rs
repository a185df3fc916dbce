//! Hankel-type matrices built from the coefficient sequence, their numeric
//! ranks, and the existence / degree-bound / uniqueness analysis.
//!
//! With 1-based row index `i` and 0-based column index `j`, the big matrix is
//! `A(i, j) = a_{n_y + i - j}`; its first column is `a0` and its last
//! `n_x` columns form `A1`. A solution exists iff `a0` lies in the range of
//! `A1`, which is decided by comparing `rank A1` with `rank A`.
//!
//! All ranks of sub-blocks of `A` are measured against one absolute cutoff,
//! `tol_rel * max(sigma_max(A), max_k |a_k|)`, so that a nearly vanishing
//! block is not promoted to full rank by its own tiny scale.
//!
//! The solvers do not look at `A` directly: they first substitute `z -> z / s`
//! (`a_k -> a_k / s^k`, branch values divided by `s`). That is a diagonal
//! scaling of `A` on both sides, so exact ranks are unchanged, but it evens
//! out the geometric growth of the `a_k` and keeps the rank decisions away
//! from the cutoff on clustered or large branches.

use nalgebra::{DMatrix, DVector};

use crate::error::{MomentError, Result};
use crate::inversion;
use crate::linalg::{inf_norm, rank_above, spectral_norm};
use crate::tolerance::ToleranceSet;
use crate::transform::{exp_transform, BranchSolution, ExpCoefficients, MomentSequence};

#[derive(Debug, Clone, PartialEq)]
pub struct HankelSystem {
    pub n_x: usize,
    pub n_y: usize,
    /// `n_x x (n_x + 1)`.
    pub a: DMatrix<f64>,
    /// First column of `a`.
    pub a0: DVector<f64>,
    /// Last `n_x` columns of `a`.
    pub a1: DMatrix<f64>,
    pub a1_rank: usize,
    /// Rank of the whole of `a`, i.e. of `[a0 | A1]`.
    pub a_rank: usize,
    pub n_x_tilde: usize,
    pub n_y_tilde: usize,
    pub a0_tilde: DMatrix<f64>,
    pub a1_tilde: DMatrix<f64>,
    /// Absolute singular-value cutoff used for every rank above.
    pub rank_threshold: f64,
    pub tol_rel: f64,
}

impl HankelSystem {
    /// `a0 in range(A1)`.
    pub fn solvable(&self) -> bool {
        self.a1_rank == self.a_rank
    }

    /// First column of the reduced matrix `A0~`.
    pub fn a0_tilde_first_column(&self) -> DVector<f64> {
        self.a0_tilde.column(0).into_owned()
    }

    /// Smallest `j >= 1` with `a0 in span{a_1..a_j}`, or 0 when `a0`
    /// vanishes. `None` when no prefix spans `a0`.
    pub fn d_min(&self) -> Option<usize> {
        let a0_inf = self.a0.amax();
        if a0_inf <= self.tol_rel * inf_norm(&self.a).max(1.0) {
            return Some(0);
        }
        (1..=self.n_x).find(|&j| {
            let with = self.a.columns(0, j + 1).into_owned();
            let without = self.a.columns(1, j).into_owned();
            rank_above(&with, self.rank_threshold) == rank_above(&without, self.rank_threshold)
        })
    }
}

/// Builds `A`, `A1` and the reduced pair from `a_0..a_{n_x + n_y}`.
pub fn build_hankel(a: &ExpCoefficients, n_x: usize, n_y: usize, tol_rel: f64) -> Result<HankelSystem> {
    if a.max_index() != n_x + n_y {
        return Err(MomentError::DimensionMismatch(format!(
            "coefficient sequence has {} entries, expected n_x + n_y + 1 = {}",
            a.max_index() + 1,
            n_x + n_y + 1
        )));
    }
    if n_x == 0 {
        return Err(MomentError::NoPositiveBranches);
    }
    let (nx, ny) = (n_x as i64, n_y as i64);
    let big = DMatrix::from_fn(n_x, n_x + 1, |r, c| a.get(ny + r as i64 + 1 - c as i64));
    let a0 = big.column(0).into_owned();
    let a1 = big.columns(1, n_x).into_owned();

    // a block that vanishes identically is pure roundoff after the
    // triangular solve, so the cutoff never drops below the sequence scale
    let threshold = tol_rel * spectral_norm(&big).max(a.max_abs());
    let a1_rank = rank_above(&a1, threshold);
    let a_rank = rank_above(&big, threshold);

    // A1 contains a unit lower-triangular block of size n_x - n_y, so its
    // exact rank is never below that
    let n_x_tilde = a1_rank.max(n_x.saturating_sub(n_y));
    let n_y_tilde = (ny - nx + n_x_tilde as i64) as usize;
    let (a0_tilde, a1_tilde) = reduced_pair(a, n_x_tilde, n_y_tilde);

    Ok(HankelSystem {
        n_x,
        n_y,
        a: big,
        a0,
        a1,
        a1_rank,
        a_rank,
        n_x_tilde,
        n_y_tilde,
        a0_tilde,
        a1_tilde,
        rank_threshold: threshold,
        tol_rel,
    })
}

/// `A0~(i, j) = a_{n~_y + 1 + i - j}`, `A1~(i, j) = a_{n~_y + i - j}`.
fn reduced_pair(a: &ExpCoefficients, nxt: usize, nyt: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let nyt = nyt as i64;
    let a0t = DMatrix::from_fn(nxt, nxt, |r, c| a.get(nyt + 1 + r as i64 - c as i64));
    let a1t = DMatrix::from_fn(nxt, nxt, |r, c| a.get(nyt + r as i64 - c as i64));
    (a0t, a1t)
}

/// Existence, degree bounds and uniqueness for a moment sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SolvabilityReport {
    pub n_x: usize,
    pub n_y: usize,
    pub exists: bool,
    pub rank_a1: usize,
    pub d_min: usize,
    pub d_max: usize,
    pub unique: bool,
    pub minimal_solution: Option<BranchSolution>,
    /// Relative rank tolerance the report was computed with.
    pub tol_rank: f64,
    /// Why `minimal_solution` is absent although `exists` holds.
    pub note: Option<String>,
}

impl SolvabilityReport {
    /// Number of common roots a solution may add to the minimal one.
    pub fn freedom(&self) -> usize {
        self.d_max - self.d_min
    }
}

/// `max |a_k|^{1/k}` over the upper half `ceil(K/2) <= k <= K`, roughly the
/// largest branch magnitude on the positive side, but never below 1: exact
/// zeros among the `a_k` come out as roundoff, and dividing that by `s^k`
/// with `s < 1` would inflate it.
pub fn balancing_scale(a: &ExpCoefficients) -> f64 {
    let k_max = a.max_index();
    let s = (k_max.div_ceil(2).max(1)..=k_max)
        .map(|k| a.get(k as i64).abs().powf(1.0 / k as f64))
        .fold(0.0, f64::max);
    if s.is_finite() {
        s.max(1.0)
    } else {
        1.0
    }
}

/// `a_k / s^k`.
pub fn rescaled(a: &ExpCoefficients, s: f64) -> ExpCoefficients {
    let mut p = 1.0;
    let vals = a
        .values()
        .iter()
        .map(|v| {
            let out = v / p;
            p *= s;
            out
        })
        .collect();
    ExpCoefficients::new(vals).expect("a_0 is unchanged")
}

/// Structural facts about the positive side of a problem. The Hankel system
/// is built from the sequence rescaled by `scale`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct SideStructure {
    pub hankel: Option<HankelSystem>,
    pub scale: f64,
    pub exists: bool,
    pub rank_a1: usize,
    pub d_min: usize,
}

pub(crate) fn side_structure(a: &ExpCoefficients, n_x: usize, n_y: usize, tol_rel: f64) -> Result<SideStructure> {
    if n_x == 0 {
        return Ok(SideStructure {
            hankel: None,
            scale: 1.0,
            exists: true,
            rank_a1: 0,
            d_min: 0,
        });
    }
    let scale = balancing_scale(a);
    let h = build_hankel(&rescaled(a, scale), n_x, n_y, tol_rel)?;
    let exists = h.solvable();
    let d_min = if exists { h.d_min().unwrap_or(n_x) } else { 0 };
    Ok(SideStructure {
        scale,
        exists,
        rank_a1: h.a1_rank,
        d_min,
        hankel: Some(h),
    })
}

/// Decides solvability and the degree bounds; never fails on a valid
/// sequence. When a solution exists the minimal-degree one is attached,
/// unless it is not real (see `note`).
pub fn analyze(m: &MomentSequence, tol: &ToleranceSet) -> Result<SolvabilityReport> {
    m.check_split()?;
    let a = exp_transform(m);
    let side = side_structure(&a, m.n_x(), m.n_y(), tol.rank)?;
    let n_x = m.n_x();
    // without a solution there is no d_min; report 0 and keep d_max = d_min + n_x - rank
    let d_min = side.d_min;
    let d_max = d_min + n_x - side.rank_a1;
    let (minimal_solution, note) = if side.exists {
        match inversion::invert_min_degree(m, inversion::Method::Companion, tol) {
            Ok(sol) => (Some(sol), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    Ok(SolvabilityReport {
        n_x,
        n_y: m.n_y(),
        exists: side.exists,
        rank_a1: side.rank_a1,
        d_min,
        d_max,
        unique: side.rank_a1 == n_x,
        minimal_solution,
        tol_rank: tol.rank,
        note,
    })
}
