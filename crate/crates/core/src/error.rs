use thiserror::Error;

/// Errors produced by the inversion, certificate and trigonometric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MomentError {
    /// The data vector `a0` is not in the range of `A1`.
    #[error("no solution: a0 is not in the range of A1 (rank A1 = {rank_a1}, rank A = {rank_a})")]
    NoSolution { rank_a1: usize, rank_a: usize },

    #[error("no real branch solution: root {re} + {im}i has a non-negligible imaginary part")]
    NonRealSolution { re: f64, im: f64 },

    #[error("reduced matrix is numerically singular (rank {rank} of {size})")]
    SingularReducedSystem { rank: usize, size: usize },

    #[error("no positive branches (n_x = 0)")]
    NoPositiveBranches,

    #[error("family overflow: {requested} common roots requested, at most {available} allowed")]
    FamilyOverflow { requested: usize, available: usize },

    #[error("repeated branch values: separation {separation:e} is below tolerance")]
    RepeatedRoots { separation: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("signal is rank deficient: Hankel rank {rank} < {modes} modes")]
    RankDeficientSignal { rank: usize, modes: usize },

    #[error("recovered nodes are too close: separation {separation:e} rad")]
    IllConditionedNodes { separation: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl MomentError {
    /// Stable machine-readable name used in the CLI error object.
    pub fn kind(&self) -> &'static str {
        match self {
            MomentError::NoSolution { .. } => "NoSolution",
            MomentError::NonRealSolution { .. } => "NonRealSolution",
            MomentError::SingularReducedSystem { .. } => "SingularReducedSystem",
            MomentError::NoPositiveBranches => "NoPositiveBranches",
            MomentError::FamilyOverflow { .. } => "FamilyOverflow",
            MomentError::RepeatedRoots { .. } => "RepeatedRoots",
            MomentError::DimensionMismatch(_) => "DimensionMismatch",
            MomentError::RankDeficientSignal { .. } => "RankDeficientSignal",
            MomentError::IllConditionedNodes { .. } => "IllConditionedNodes",
            MomentError::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, MomentError>;
