//! Motivated belief updating over categorical state spaces.
//!
//! An agent holds a prior `p(s)` over a finite set of states, observes
//! evidence with likelihood `p(o | s)`, and — unlike a plain Bayesian —
//! gets to *want* things. It revises its belief to the distribution `q`
//! maximizing
//!
//! ```text
//! F[q] = U[q] + alpha * E_q[ln p(o | s)] - lambda * KL(q || p)
//! ```
//!
//! where `U` scores how pleasant a belief is to hold (affective utility),
//! `alpha >= 0` weights fidelity to the evidence, and `lambda > 0` prices
//! movement away from the prior. With constant utility and unit weights the
//! optimum is exactly the Bayes posterior; turning the knobs away from that
//! point produces wishful thinking, confirmation-friendly evidence
//! selection, and attitude polarization as *optimal* behavior under the
//! modified objective.
//!
//! The crate is organized in layers:
//!
//! * [`belief`] — categorical distributions, likelihoods, and the
//!   information-theoretic primitives (entropy, KL divergence, expected
//!   log-likelihood, Bayes updates). All in nats.
//! * [`objective`] — utility functionals and the objective itself, split
//!   into its utility / accuracy / complexity parts.
//! * [`solver`] — four routes to the optimum: the exponential-family
//!   closed form, the zero-tempering limit, logit-space gradient ascent
//!   for general utilities, and a brute-force grid oracle.
//! * [`experiments`] — parameter sweeps over evidence strength, evidence
//!   selection with threshold detection, objective landscapes, and
//!   two-agent polarization, all returning deterministic row-major tables.
//!
//! The `parallel` feature (on by default) evaluates large sweeps with
//! rayon; disabling it gives a dependency-free sequential build that
//! produces byte-identical results.

#![forbid(unsafe_code)]

pub mod belief;
pub mod error;
pub mod experiments;
pub mod objective;
pub mod solver;

pub use belief::{
    bayes_update, entropy, expected_log_likelihood, kl_divergence, Categorical, Likelihood,
};
pub use error::{Error, Result};
pub use experiments::{
    cheap_confirmation_scenario, costly_confirmation_scenario, evidence_strength_sweep,
    objective_landscape_heatmap, polarization_sweep, select_evidence, selection_boundary_heatmap,
    selection_objective_sweep, selection_threshold, Axis, AxisScale, BernoulliEvidence,
    EvidenceOption, OptionOutcome, SelectionOutcome, SelectionScenario, SweepKind, SweepResult,
    DEFAULT_THRESHOLD_RANGE,
};
pub use objective::{
    objective_value, vfe_value, AgentParams, FnUtility, LinearAffectiveUtility,
    ObjectiveBreakdown, ObservationTag, UtilityFunctional,
};
pub use solver::{
    brute_force_update, closed_form_update, limit_update, linear_update, logit_gradient,
    logit_objective, numeric_update, Convergence, NumericSolverConfig, SolveMethod, UpdateResult,
};
