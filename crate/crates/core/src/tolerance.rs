/// Numerical thresholds used by analysis and inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceSet {
    /// Relative singular-value cutoff for numeric ranks.
    pub rank: f64,
    /// Absolute cutoff below which an eigenvalue counts as a structural zero.
    /// `None` selects `1e-8 * (1 + max |a_k|)` for the coefficient sequence
    /// being inverted.
    pub zero: Option<f64>,
    /// Relative cutoff on imaginary parts: a root is real when
    /// `|Im z| <= imag * (1 + |Re z|)`.
    pub imag: f64,
}

pub const DEFAULT_RANK_TOL: f64 = 1e-9;
pub const DEFAULT_IMAG_TOL: f64 = 1e-8;
pub const DEFAULT_ZERO_SCALE: f64 = 1e-8;

impl Default for ToleranceSet {
    fn default() -> Self {
        Self {
            rank: DEFAULT_RANK_TOL,
            zero: None,
            imag: DEFAULT_IMAG_TOL,
        }
    }
}

impl ToleranceSet {
    pub fn with_rank(rank: f64) -> Self {
        Self {
            rank,
            ..Self::default()
        }
    }

    /// Zero threshold for a coefficient sequence whose largest entry is `max_abs_a`.
    pub fn zero_for(&self, max_abs_a: f64) -> f64 {
        self.zero.unwrap_or(DEFAULT_ZERO_SCALE * (1.0 + max_abs_a))
    }
}
