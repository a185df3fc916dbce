//! Inversion of finite Markov moment systems
//!
//! ```text
//! m_k = sum_{j=1}^{n_x} x_j^k - sum_{j=1}^{n_y} y_j^k,   k = 1..K,  n_x + n_y = K
//! ```
//!
//! for the branch values `x_j`, `y_j`, with solvability and degree-bound
//! analysis, families of non-unique solutions, higher moments, Markov-type
//! interlacing certificates and a trigonometric (Prony-type) variant.
//!
//! ```
//! use momentkit::{invert_min_degree, Method, MomentSequence, ToleranceSet};
//!
//! let m = MomentSequence::new(vec![3.0, 5.0], 2, 0).unwrap();
//! let sol = invert_min_degree(&m, Method::Companion, &ToleranceSet::default()).unwrap();
//! assert!((sol.xs[0] - 1.0).abs() < 1e-12 && (sol.xs[1] - 2.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod error;
pub mod inversion;
pub mod linalg;
pub mod markov;
pub mod structure;
pub mod tolerance;
pub mod transform;
pub mod trig;

pub use error::{MomentError, Result};
pub use inversion::{
    companion_coefficients, d_coefficients, extend_moments, family_member, invert_detailed, invert_min_degree,
    next_moment, HigherMoments, Method,
};
pub use linalg::numeric_rank;
pub use markov::{density_eval, factorization_residual, markov_certificate, weights, MarkovCertificate, WeightData};
pub use structure::{analyze, build_hankel, HankelSystem, SolvabilityReport};
pub use tolerance::ToleranceSet;
pub use transform::{
    branch_to_polynomials, exp_transform, forward_moments, inv_exp_transform, power_sums, BranchSolution,
    ExpCoefficients, MomentSequence, PolynomialPair,
};
pub use trig::{trig_forward, trig_invert, TrigOptions, TrigSignal};
