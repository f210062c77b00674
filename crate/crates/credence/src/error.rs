//! The one error type shared by every layer of the crate.
//!
//! Construction errors (bad probability vectors, out-of-range likelihoods)
//! and solve-time errors (support violations, non-convergence) live in the
//! same enum so that sweep code can propagate either kind unchanged.

use crate::solver::UpdateResult;
use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building distributions or solving
/// for a posterior.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A categorical distribution needs at least two states.
    #[error("a categorical distribution needs at least two states, got {0}")]
    TooFewStates(usize),

    /// A probability entry was negative, NaN, or infinite.
    #[error("probability at state {index} must be finite and non-negative, got {value}")]
    InvalidProbability { index: usize, value: f64 },

    /// Probabilities summed too far from one to be rounding noise.
    #[error("probabilities sum to {sum}, too far from 1 to renormalize")]
    NotNormalized { sum: f64 },

    /// A likelihood entry fell outside the unit interval.
    #[error("likelihood at state {index} must lie in [0, 1], got {value}")]
    LikelihoodOutOfRange { index: usize, value: f64 },

    /// Every likelihood entry was zero, so no observation is possible.
    #[error("likelihood must have at least one strictly positive entry")]
    AllZeroLikelihood,

    /// Two objects that must share a state space had different sizes.
    #[error("dimension mismatch: {left} states vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A distribution put mass where its reference has none, so the
    /// divergence from the reference is infinite.
    #[error("support violation: mass at state {index} where the reference is zero")]
    SupportViolation { index: usize },

    /// The prior and likelihood assign zero joint weight to every state.
    #[error("evidence has zero probability under the prior")]
    ZeroEvidence,

    /// The tempering weight must be strictly positive here; the zero-lambda
    /// limit has its own dedicated solver.
    #[error("lambda must be a positive finite number, got {0}")]
    LambdaNonPositive(f64),

    /// A scalar parameter failed validation.
    #[error("invalid parameter `{name}`: {value} ({message})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        message: &'static str,
    },

    /// Every state ended up with zero weight, so no posterior exists.
    #[error("degenerate problem: every state has zero posterior weight")]
    DegenerateProblem,

    /// The iterative solver ran out of its iteration budget. The best
    /// iterate found so far is carried along for inspection.
    #[error("solver stopped after {iterations} iterations with gradient norm {gradient_norm:e} still above tolerance")]
    NotConverged {
        iterations: usize,
        gradient_norm: f64,
        best: Box<UpdateResult>,
    },

    /// The exhaustive-search solver only handles two-state problems.
    #[error("brute-force search supports exactly two states, got {0}")]
    UnsupportedDimension(usize),

    /// Evidence selection needs at least one option to choose from.
    #[error("evidence menu is empty")]
    EmptyMenu,

    /// A sweep axis was handed an empty grid of values.
    #[error("axis `{name}` must contain at least one value")]
    EmptyGrid { name: &'static str },

    /// An operation required a menu of a specific size.
    #[error("expected a menu of {expected} evidence options, got {got}")]
    MenuSize { expected: usize, got: usize },
}
