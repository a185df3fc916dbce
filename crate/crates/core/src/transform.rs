//! Moment sequences, the exponential-transform coefficients and explicit
//! branch values.
//!
//! The coefficient sequence `a_k` is the Taylor expansion of
//! `exp(sum_k m_k z^k / k) = q(z) / p(z)`, where `p` and `q` have the
//! reciprocals of the positive and negative branch values as roots. It is
//! obtained from the moments by a unit-lower-triangular recursion, which is
//! also how it is inverted.

use crate::error::{MomentError, Result};

/// Moments `m_1..m_K` together with the branch split `n_x + n_y = K`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    values: Vec<f64>,
    n_x: usize,
    n_y: usize,
}

impl MomentSequence {
    pub fn new(values: Vec<f64>, n_x: usize, n_y: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(MomentError::InvalidInput("at least one moment is required".into()));
        }
        if n_x + n_y != values.len() {
            return Err(MomentError::InvalidInput(format!(
                "n_x + n_y = {} does not match the number of moments K = {}",
                n_x + n_y,
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(MomentError::InvalidInput(format!("non-finite moment {bad}")));
        }
        Ok(Self { values, n_x, n_y })
    }

    /// Moments `m_1..m_K` (index 0 holds `m_1`).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// 1-based access, `m(k)` for `k = 1..=K`.
    pub fn m(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    /// Errors unless `n_x + n_y = K`. Sequences built by [`forward_moments`]
    /// with a longer horizon (higher moments) may carry a different split.
    pub fn check_split(&self) -> Result<()> {
        if self.n_x + self.n_y == self.values.len() {
            Ok(())
        } else {
            Err(MomentError::InvalidInput(format!(
                "n_x + n_y = {} does not match the number of moments K = {}",
                self.n_x + self.n_y,
                self.values.len()
            )))
        }
    }

    /// The mirrored problem `-m` with the roles of `n_x` and `n_y` exchanged.
    pub fn negated(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| -v).collect(),
            n_x: self.n_y,
            n_y: self.n_x,
        }
    }
}

/// The sequence `a_0..a_K` with `a_0 = 1`; negative indices read as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpCoefficients {
    values: Vec<f64>,
}

impl ExpCoefficients {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        match values.first() {
            Some(&a0) if a0 == 1.0 => Ok(Self { values }),
            Some(&a0) => Err(MomentError::InvalidInput(format!("a_0 must be 1, got {a0}"))),
            None => Err(MomentError::InvalidInput("empty coefficient sequence".into())),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest available index `K`.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    /// `a_k`, with `a_k = 0` for `k < 0`.
    ///
    /// # Panics
    /// If `k > K`: such coefficients are not determined by the moments.
    pub fn get(&self, k: i64) -> f64 {
        self.try_get(k)
            .unwrap_or_else(|| panic!("a_{k} requested but only a_0..a_{} are known", self.max_index()))
    }

    pub fn try_get(&self, k: i64) -> Option<f64> {
        if k < 0 {
            Some(0.0)
        } else {
            self.values.get(k as usize).copied()
        }
    }

    /// Largest absolute coefficient, used to scale zero tests.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

/// Branch values of a solution. Entries are kept in canonical order:
/// ascending by value with exact zeros moved to the end.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSolution {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub degree: usize,
}

impl BranchSolution {
    pub fn new(mut xs: Vec<f64>, mut ys: Vec<f64>) -> Self {
        canonical_order(&mut xs);
        canonical_order(&mut ys);
        let degree = xs.iter().filter(|v| **v != 0.0).count();
        Self { xs, ys, degree }
    }

    pub fn n_x(&self) -> usize {
        self.xs.len()
    }

    pub fn n_y(&self) -> usize {
        self.ys.len()
    }

    /// The same solution seen from the mirrored problem.
    pub fn swapped(&self) -> Self {
        Self::new(self.ys.clone(), self.xs.clone())
    }
}

/// Sort ascending, zeros last.
pub fn canonical_order(v: &mut [f64]) {
    v.sort_by(|a, b| (*a == 0.0).cmp(&(*b == 0.0)).then(a.total_cmp(b)));
}

/// Coefficient vectors of `p(z) = prod(1 - x_j z)` and `q(z) = prod(1 - y_j z)`,
/// ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPair {
    pub c: Vec<f64>,
    pub d: Vec<f64>,
}

/// `m_k = sum x_j^k - sum y_j^k` for `k = 1..=count`.
///
/// Terms are accumulated in ascending order of magnitude so that the result
/// is independent of the input order.
pub fn forward_moments(xs: &[f64], ys: &[f64], count: usize) -> MomentSequence {
    MomentSequence {
        values: power_sums(xs, ys, count),
        n_x: xs.len(),
        n_y: ys.len(),
    }
}

/// Signed power sums `sum x_j^k - sum y_j^k`, `k = 1..=count`.
pub fn power_sums(xs: &[f64], ys: &[f64], count: usize) -> Vec<f64> {
    let mut terms: Vec<(f64, f64)> = xs
        .iter()
        .map(|&v| (v, 1.0))
        .chain(ys.iter().map(|&v| (v, -1.0)))
        .collect();
    terms.sort_by(|a, b| a.0.abs().total_cmp(&b.0.abs()).then(a.0.total_cmp(&b.0)).then(a.1.total_cmp(&b.1)));
    (1..=count as i32)
        .map(|k| terms.iter().map(|&(v, s)| s * v.powi(k)).sum())
        .collect()
}

/// Forward substitution for `k a_k = m_k + sum_{j=1}^{k-1} m_j a_{k-j}`.
pub fn exp_transform(m: &MomentSequence) -> ExpCoefficients {
    ExpCoefficients {
        values: exp_coefficients(m.values()),
    }
}

pub(crate) fn exp_coefficients(m: &[f64]) -> Vec<f64> {
    let mut a = Vec::with_capacity(m.len() + 1);
    a.push(1.0);
    for k in 1..=m.len() {
        let mut s = m[k - 1];
        for j in 1..k {
            s += m[j - 1] * a[k - j];
        }
        a.push(s / k as f64);
    }
    a
}

/// Inverse of [`exp_transform`]: `m_k = k a_k - sum_{j=1}^{k-1} m_j a_{k-j}`.
pub fn inv_exp_transform(a: &[f64]) -> Result<Vec<f64>> {
    match a.first() {
        Some(&a0) if a0 == 1.0 => {}
        Some(&a0) => return Err(MomentError::InvalidInput(format!("a_0 must be 1, got {a0}"))),
        None => return Err(MomentError::InvalidInput("empty coefficient sequence".into())),
    }
    let mut m: Vec<f64> = Vec::with_capacity(a.len() - 1);
    for k in 1..a.len() {
        let mut s = k as f64 * a[k];
        for j in 1..k {
            s -= m[j - 1] * a[k - j];
        }
        m.push(s);
    }
    Ok(m)
}

/// Ascending coefficients of `prod(1 - r z)` over `roots`, padded with zeros
/// to `roots.len() + 1` entries.
pub fn reciprocal_poly(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; roots.len() + 1];
    c[0] = 1.0;
    for (deg, &r) in roots.iter().enumerate() {
        for i in (1..=deg + 1).rev() {
            c[i] -= r * c[i - 1];
        }
    }
    c
}

pub fn branch_to_polynomials(sol: &BranchSolution) -> PolynomialPair {
    PolynomialPair {
        c: reciprocal_poly(&sol.xs),
        d: reciprocal_poly(&sol.ys),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[f64], nx: usize, ny: usize) -> MomentSequence {
        MomentSequence::new(v.to_vec(), nx, ny).unwrap()
    }

    #[test]
    fn forward_examples() {
        assert_eq!(forward_moments(&[2.0], &[], 1).values(), &[2.0]);
        assert_eq!(forward_moments(&[1.0], &[-1.0], 2).values(), &[2.0, 0.0]);
        let m = forward_moments(&[1.0, 3.0], &[0.0, 2.0], 4);
        assert_eq!(m.values(), &[2.0, 6.0, 20.0, 66.0]);
        assert_eq!((m.n_x(), m.n_y()), (2, 2));
    }

    #[test]
    fn forward_is_order_independent() {
        let a = forward_moments(&[0.1, -2.7, 1.3], &[0.7, 2.2], 5);
        let b = forward_moments(&[1.3, 0.1, -2.7], &[2.2, 0.7], 5);
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn exp_transform_examples() {
        assert_eq!(exp_transform(&seq(&[0.0, 0.0], 1, 1)).values(), &[1.0, 0.0, 0.0]);
        assert_eq!(exp_transform(&seq(&[2.0, 0.0], 1, 1)).values(), &[1.0, 2.0, 2.0]);
        assert_eq!(exp_transform(&seq(&[3.0, 5.0], 2, 0)).values(), &[1.0, 3.0, 7.0]);
    }

    #[test]
    fn inv_exp_transform_examples() {
        assert_eq!(inv_exp_transform(&[1.0, 0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(inv_exp_transform(&[1.0, 2.0, 2.0]).unwrap(), vec![2.0, 0.0]);
        assert_eq!(inv_exp_transform(&[1.0, 3.0, 7.0]).unwrap(), vec![3.0, 5.0]);
        assert!(inv_exp_transform(&[2.0, 1.0]).is_err());
        assert!(ExpCoefficients::new(vec![0.5]).is_err());
    }

    #[test]
    fn negative_index_reads_zero() {
        let a = ExpCoefficients::new(vec![1.0, 3.0]).unwrap();
        assert_eq!(a.get(-3), 0.0);
        assert_eq!(a.get(1), 3.0);
        assert_eq!(a.try_get(2), None);
    }

    #[test]
    #[should_panic]
    fn index_beyond_k_panics() {
        ExpCoefficients::new(vec![1.0, 3.0]).unwrap().get(2);
    }

    #[test]
    fn polynomial_examples() {
        let p = branch_to_polynomials(&BranchSolution::new(vec![1.0, 2.0], vec![]));
        assert_eq!((p.c, p.d), (vec![1.0, -3.0, 2.0], vec![1.0]));
        let p = branch_to_polynomials(&BranchSolution::new(vec![0.0], vec![0.0]));
        assert_eq!((p.c, p.d), (vec![1.0, 0.0], vec![1.0, 0.0]));
        let p = branch_to_polynomials(&BranchSolution::new(vec![1.0], vec![-1.0]));
        assert_eq!((p.c, p.d), (vec![1.0, -1.0], vec![1.0, 1.0]));
    }

    #[test]
    fn malformed_sequences_rejected() {
        assert!(MomentSequence::new(vec![1.0, 2.0], 1, 0).is_err());
        assert!(MomentSequence::new(vec![], 0, 0).is_err());
        assert!(MomentSequence::new(vec![f64::NAN], 1, 0).is_err());
    }

    #[test]
    fn canonical_order_puts_zeros_last() {
        let s = BranchSolution::new(vec![0.0, 2.0, -1.0], vec![0.0]);
        assert_eq!(s.xs, vec![-1.0, 2.0, 0.0]);
        assert_eq!(s.degree, 2);
    }
}
