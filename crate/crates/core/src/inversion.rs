//! Minimal-degree branch extraction, solution families and higher moments.
//!
//! The positive branches are the nonzero eigenvalues of the reduced pencil
//! `A0~ v = x A1~ v`, equivalently the roots of the companion polynomial
//! `P(z) = z^n + c_1 z^{n-1} + ... + c_n` with `A1~ c' = -a0~`. The negative
//! branches come from running the same pipeline on `-m` with the split
//! mirrored. `P` carries `n~_x - D_min` structural zero roots.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{MomentError, Result};
use crate::linalg::{min_norm_solve, null_space, numeric_rank, real_eigenvalues};
use crate::structure::{side_structure, HankelSystem};
use crate::tolerance::ToleranceSet;
use crate::transform::{canonical_order, exp_transform, BranchSolution, ExpCoefficients, MomentSequence};

/// How the roots of the reduced system are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Standard eigenproblem of `A1~^{-1} A0~`.
    Geneig,
    /// Eigenvalues of the companion matrix of `c'`.
    #[default]
    Companion,
}

impl std::str::FromStr for Method {
    type Err = MomentError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geneig" => Ok(Method::Geneig),
            "companion" => Ok(Method::Companion),
            other => Err(MomentError::InvalidInput(format!("unknown method '{other}'"))),
        }
    }
}

/// Solves `A1~ c' = -a0~` for the non-leading companion coefficients.
pub fn companion_coefficients(h: &HankelSystem) -> Result<Vec<f64>> {
    let n = h.n_x_tilde;
    if n == 0 {
        return Ok(Vec::new());
    }
    let rank = numeric_rank(&h.a1_tilde, h.tol_rel);
    if rank < n {
        return Err(MomentError::SingularReducedSystem { rank, size: n });
    }
    let rhs = -h.a0_tilde_first_column();
    let c = h
        .a1_tilde
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or(MomentError::SingularReducedSystem { rank, size: n })?;
    Ok(c.iter().copied().collect())
}

/// Companion matrix of `z^n + c_1 z^{n-1} + ... + c_n`: first column `-c`,
/// ones on the superdiagonal.
pub fn companion_matrix(c: &[f64]) -> DMatrix<f64> {
    let n = c.len();
    DMatrix::from_fn(n, n, |i, j| {
        if j == 0 {
            -c[i]
        } else if j == i + 1 {
            1.0
        } else {
            0.0
        }
    })
}

/// Per-side byproducts of an inversion, reported in verbose mode.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SideDiagnostics {
    pub n_tilde: usize,
    pub d_min: usize,
    /// Every eigenvalue of the reduced system.
    pub eigenvalues: Vec<Complex64>,
    /// Eigenvalues with `|z| <= zero tolerance`.
    pub zeros_filtered: usize,
    pub zero_tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Inversion {
    pub solution: BranchSolution,
    pub x_side: SideDiagnostics,
    pub y_side: SideDiagnostics,
}

/// Minimal-degree solution. See [`invert_detailed`].
pub fn invert_min_degree(m: &MomentSequence, method: Method, tol: &ToleranceSet) -> Result<BranchSolution> {
    invert_detailed(m, method, tol).map(|inv| inv.solution)
}

/// Minimal-degree solution together with the raw eigenvalues of both sides.
pub fn invert_detailed(m: &MomentSequence, method: Method, tol: &ToleranceSet) -> Result<Inversion> {
    m.check_split()?;
    let (xs, x_side) = positive_branches(m, method, tol)?;
    let (ys, y_side) = positive_branches(&m.negated(), method, tol)?;
    Ok(Inversion {
        solution: BranchSolution::new(xs, ys),
        x_side,
        y_side,
    })
}

/// The `n_x` positive branch values (zero padded) of the minimal solution.
fn positive_branches(m: &MomentSequence, method: Method, tol: &ToleranceSet) -> Result<(Vec<f64>, SideDiagnostics)> {
    let n_x = m.n_x();
    let a = exp_transform(m);
    let side = side_structure(&a, n_x, m.n_y(), tol.rank)?;
    let zero_tol = tol.zero_for(a.max_abs());
    let mut diag = SideDiagnostics {
        zero_tol,
        ..SideDiagnostics::default()
    };
    let scale = side.scale;
    let Some(h) = side.hankel else {
        return Ok((Vec::new(), diag));
    };
    if !side.exists {
        return Err(MomentError::NoSolution {
            rank_a1: h.a1_rank,
            rank_a: h.a_rank,
        });
    }
    let d_min = side.d_min.min(h.n_x_tilde);
    diag.n_tilde = h.n_x_tilde;
    diag.d_min = d_min;
    if h.n_x_tilde == 0 {
        return Ok((vec![0.0; n_x], diag));
    }

    let (mut eigenvalues, mut retained) = match method {
        Method::Companion => {
            let c = companion_coefficients(&h)?;
            let eig = real_eigenvalues(&companion_matrix(&c));
            // P(z) = z^{n~ - d_min} Q(z); the trailing coefficients vanish
            // exactly, so the nonzero roots are those of Q
            let retained = real_eigenvalues(&companion_matrix(&c[..d_min]));
            (eig, retained)
        }
        Method::Geneig => {
            let eig = pencil_eigenvalues(&h)?;
            let mut sorted = eig.clone();
            sorted.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
            sorted.truncate(d_min);
            (eig, sorted)
        }
    };
    // back from the rescaled variable
    for z in eigenvalues.iter_mut().chain(retained.iter_mut()) {
        *z *= scale;
    }
    diag.zeros_filtered = eigenvalues.iter().filter(|z| z.norm() <= zero_tol).count();
    diag.eigenvalues = eigenvalues;

    retained.retain(|z| z.norm() > zero_tol);
    let mut xs = Vec::with_capacity(n_x);
    for z in &retained {
        if z.im.abs() > tol.imag * (1.0 + z.re.abs()) {
            return Err(MomentError::NonRealSolution { re: z.re, im: z.im });
        }
        xs.push(z.re);
    }
    xs.resize(n_x, 0.0);
    Ok((xs, diag))
}

/// Eigenvalues of `A1~^{-1} A0~`.
pub fn pencil_eigenvalues(h: &HankelSystem) -> Result<Vec<Complex64>> {
    let n = h.n_x_tilde;
    let rank = numeric_rank(&h.a1_tilde, h.tol_rel);
    if rank < n {
        return Err(MomentError::SingularReducedSystem { rank, size: n });
    }
    let reduced = h
        .a1_tilde
        .clone()
        .lu()
        .solve(&h.a0_tilde)
        .ok_or(MomentError::SingularReducedSystem { rank, size: n })?;
    Ok(real_eigenvalues(&reduced))
}

/// Coefficients of `q` from those of `p`: `d_k = sum_{j=0}^{min(k, n_x)} c_j a_{k-j}`.
pub fn d_coefficients(c: &[f64], a: &ExpCoefficients, n_y: usize) -> Result<Vec<f64>> {
    if c.first() != Some(&1.0) {
        return Err(MomentError::InvalidInput("c_0 must be 1".into()));
    }
    if a.max_index() < n_y {
        return Err(MomentError::DimensionMismatch(format!(
            "need a_0..a_{n_y}, have a_0..a_{}",
            a.max_index()
        )));
    }
    let n_x = c.len() - 1;
    Ok((0..=n_y)
        .map(|k| (0..=k.min(n_x)).map(|j| c[j] * a.get((k - j) as i64)).sum())
        .collect())
}

/// Appends each `t` in `r_roots` to both sides of `minimal` (a common factor
/// `prod(1 - t z)` of `p` and `q`), filling zero slots so that the branch
/// counts are unchanged. `freedom` is `D_max - D_min`.
pub fn family_member(minimal: &BranchSolution, freedom: usize, r_roots: &[f64]) -> Result<BranchSolution> {
    let x_slots = minimal.xs.iter().filter(|v| **v == 0.0).count();
    let y_slots = minimal.ys.iter().filter(|v| **v == 0.0).count();
    let available = freedom.min(x_slots).min(y_slots);
    if r_roots.len() > available {
        return Err(MomentError::FamilyOverflow {
            requested: r_roots.len(),
            available,
        });
    }
    Ok(BranchSolution::new(
        fill_zero_slots(&minimal.xs, r_roots),
        fill_zero_slots(&minimal.ys, r_roots),
    ))
}

fn fill_zero_slots(values: &[f64], extra: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = values.iter().copied().filter(|v| *v != 0.0).collect();
    out.extend_from_slice(extra);
    out.resize(values.len(), 0.0);
    canonical_order(&mut out);
    out
}

/// One particular solution `c` of `A1 c = -a0` together with the data
/// needed to continue the coefficient sequence past `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct HigherMoments {
    moments: Vec<f64>,
    a: Vec<f64>,
    cbar: Vec<f64>,
    null: DMatrix<f64>,
}

impl HigherMoments {
    /// Sets up the minimum-norm solution of `A1 c = -a0` (minimum norm in the
    /// balanced variable; `c` is returned in the original one).
    pub fn new(m: &MomentSequence, tol: &ToleranceSet) -> Result<Self> {
        m.check_split()?;
        let a = exp_transform(m);
        let side = side_structure(&a, m.n_x(), m.n_y(), tol.rank)?;
        let (cbar, null) = match side.hankel {
            None => (Vec::new(), DMatrix::zeros(0, 0)),
            Some(h) => {
                if !side.exists {
                    return Err(MomentError::NoSolution {
                        rank_a1: h.a1_rank,
                        rank_a: h.a_rank,
                    });
                }
                // c_j = s^j c'_j undoes the balancing
                let powers: Vec<f64> = (1..=h.n_x).map(|j| side.scale.powi(j as i32)).collect();
                let c = min_norm_solve(&h.a1, &(-&h.a0), h.rank_threshold);
                let mut null = null_space(&h.a1, h.rank_threshold);
                for (mut row, p) in null.row_iter_mut().zip(&powers) {
                    row *= *p;
                }
                (c.iter().zip(&powers).map(|(c, p)| c * p).collect(), null)
            }
        };
        Ok(Self {
            moments: m.values().to_vec(),
            a: a.values().to_vec(),
            cbar,
            null,
        })
    }

    /// Columns spanning the numerical null space of `A1` (not normalized).
    /// Adding any combination to `c` gives another particular solution.
    pub fn null_directions(&self) -> &DMatrix<f64> {
        &self.null
    }

    pub fn cbar(&self) -> &[f64] {
        &self.cbar
    }

    /// Replaces the particular solution, e.g. by one shifted along the null
    /// space of `A1`. Any solution yields the same higher moments.
    pub fn with_cbar(mut self, cbar: Vec<f64>) -> Result<Self> {
        if cbar.len() != self.cbar.len() {
            return Err(MomentError::DimensionMismatch(format!(
                "c has {} entries, expected {}",
                cbar.len(),
                self.cbar.len()
            )));
        }
        self.cbar = cbar;
        Ok(self)
    }

    /// `m_{K+1}`.
    pub fn next(&self) -> f64 {
        let k1 = self.moments.len() + 1;
        let a_next: f64 = -self.recurrence(&self.a, k1);
        k1 as f64 * a_next - (1..k1).map(|j| self.moments[j - 1] * self.a[k1 - j]).sum::<f64>()
    }

    /// `m_1..m_{K+count}`, continuing the coefficient sequence with the
    /// fixed `c` and converting back row by row.
    pub fn extend(&self, count: usize) -> Vec<f64> {
        let mut a = self.a.clone();
        let mut m = self.moments.clone();
        for k in (m.len() + 1)..=(m.len() + count) {
            let ak = -self.recurrence(&a, k);
            a.push(ak);
            let mk = k as f64 * ak - (1..k).map(|j| m[j - 1] * a[k - j]).sum::<f64>();
            m.push(mk);
        }
        m
    }

    /// `a_{K+1}`.
    pub fn next_coefficient(&self) -> f64 {
        -self.recurrence(&self.a, self.moments.len() + 1)
    }

    /// `sum_{j=1}^{n_x} c_j a_{k-j}`.
    fn recurrence(&self, a: &[f64], k: usize) -> f64 {
        self.cbar.iter().enumerate().map(|(i, c)| c * a[k - (i + 1)]).sum()
    }
}

/// `m_{K+1}` of every solution, from a minimum-norm solution of `A1 c = -a0`.
pub fn next_moment(m: &MomentSequence, tol: &ToleranceSet) -> Result<f64> {
    HigherMoments::new(m, tol).map(|h| h.next())
}

/// `m_1..m_{K+count}` of the (family-invariant) solution.
pub fn extend_moments(m: &MomentSequence, count: usize, tol: &ToleranceSet) -> Result<Vec<f64>> {
    HigherMoments::new(m, tol).map(|h| h.extend(count))
}
