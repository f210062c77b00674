//! Solvers for the motivated belief update.
//!
//! Four strategies produce the utility-optimal posterior
//! `argmax_q U[q] + alpha * E_q[ln lik] - lambda * KL(q || prior)`:
//!
//! * [`closed_form_update`] — exact exponential-family solution for linear
//!   utilities and `lambda > 0`: `q*(s) ∝ prior(s) * exp[(c_s + alpha *
//!   ln lik(s)) / lambda]`, evaluated in log space with max subtraction so
//!   extreme weight ratios cannot overflow.
//! * [`limit_update`] — the `lambda -> 0+` limit, where all mass collapses
//!   onto the states maximizing `c_s + alpha * ln lik(s)`; exact ties keep
//!   mass proportional to the prior.
//! * [`numeric_update`] — mirror ascent (exponentiated gradient) in logit
//!   space for arbitrary differentiable utilities.
//! * [`brute_force_update`] — exhaustive grid search for two-state
//!   problems; slow, simple, and useful as an independent oracle.
//!
//! Every solver returns an [`UpdateResult`] whose posterior stays within
//! the support of the prior and whose breakdown is evaluated at that
//! posterior with the same weights.

use crate::belief::{Categorical, Likelihood};
use crate::error::{Error, Result};
use crate::objective::{
    objective_value, AgentParams, LinearAffectiveUtility, ObservationTag, UtilityFunctional,
};

/// Which strategy produced an [`UpdateResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    ClosedForm,
    LimitLambdaZero,
    Numeric,
    BruteForce,
}

impl SolveMethod {
    /// Stable lowercase name, used in serialized output.
    pub fn name(self) -> &'static str {
        match self {
            SolveMethod::ClosedForm => "closed_form",
            SolveMethod::LimitLambdaZero => "limit_lambda_zero",
            SolveMethod::Numeric => "numeric",
            SolveMethod::BruteForce => "brute_force",
        }
    }
}

/// Iteration report from the numeric solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Convergence {
    /// Gradient-ascent iterations performed.
    pub iterations: usize,
    /// Euclidean norm of the simplex-projected gradient at the final iterate.
    pub gradient_norm: f64,
    /// Whether the norm fell below the configured tolerance.
    pub converged: bool,
}

/// A solved update: the optimal posterior, the objective evaluated there,
/// and how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdateResult {
    pub posterior: Categorical,
    pub breakdown: crate::objective::ObjectiveBreakdown,
    pub method: SolveMethod,
    /// Present only for [`SolveMethod::Numeric`].
    pub convergence: Option<Convergence>,
}

/// Settings for [`numeric_update`].
#[derive(Debug, Clone, PartialEq)]
pub struct NumericSolverConfig {
    /// Iteration budget before giving up with [`Error::NotConverged`].
    pub max_iterations: usize,
    /// Initial ascent step; adapted by backtracking (halved on rejection,
    /// doubled on acceptance).
    pub step_size: f64,
    /// Convergence threshold on the projected gradient norm.
    pub gradient_tolerance: f64,
    /// Central-difference step used when the utility supplies no analytic
    /// gradient.
    pub finite_difference_step: f64,
}

impl Default for NumericSolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 10_000,
            step_size: 0.1,
            gradient_tolerance: 1e-10,
            finite_difference_step: 1e-6,
        }
    }
}

impl NumericSolverConfig {
    fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter {
                name: "max_iterations",
                value: 0.0,
                message: "must be at least 1",
            });
        }
        for (name, value) in [
            ("step_size", self.step_size),
            ("gradient_tolerance", self.gradient_tolerance),
            ("finite_difference_step", self.finite_difference_step),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    message: "must be finite and positive",
                });
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Shared validation
// ---------------------------------------------------------------------------

fn check_dims(prior: &Categorical, lik: &Likelihood) -> Result<()> {
    if prior.n_states() != lik.n_states() {
        return Err(Error::DimensionMismatch {
            left: prior.n_states(),
            right: lik.n_states(),
        });
    }
    Ok(())
}

fn check_lambda_positive(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::LambdaNonPositive(lambda));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            message: "must be finite and non-negative",
        });
    }
    Ok(())
}

/// Per-state drive `g_s = c_s + alpha * ln lik(s)`.
///
/// Follows the crate's zero-weight convention: with `alpha = 0` the
/// likelihood is ignored entirely, so a zero likelihood entry does not
/// produce `0 * -inf`. States outside the prior support report `-inf`.
fn state_drive(
    prior: &Categorical,
    lik: &Likelihood,
    utility: &LinearAffectiveUtility,
    alpha: f64,
) -> Vec<f64> {
    let coeffs = utility.coeffs();
    (0..prior.n_states())
        .map(|s| {
            if prior.prob(s) == 0.0 {
                return f64::NEG_INFINITY;
            }
            if alpha == 0.0 {
                coeffs[s]
            } else if lik.value(s) == 0.0 {
                f64::NEG_INFINITY
            } else {
                coeffs[s] + alpha * lik.value(s).ln()
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Closed form
// ---------------------------------------------------------------------------

/// Exact posterior for a linear utility and `lambda > 0`.
///
/// Computed as a softmax over `ln prior(s) + (c_s + alpha * ln lik(s)) /
/// lambda` with max subtraction, so the result is stable even when the
/// per-state weights span hundreds of orders of magnitude. States outside
/// the prior's support, or ruled out by the observation when `alpha > 0`,
/// keep exactly zero mass.
pub fn closed_form_update(
    prior: &Categorical,
    lik: &Likelihood,
    utility: &LinearAffectiveUtility,
    alpha: f64,
    lambda: f64,
) -> Result<UpdateResult> {
    check_dims(prior, lik)?;
    if utility.n_states() != prior.n_states() {
        return Err(Error::DimensionMismatch {
            left: utility.n_states(),
            right: prior.n_states(),
        });
    }
    check_lambda_positive(lambda)?;
    check_alpha(alpha)?;

    let drive = state_drive(prior, lik, utility, alpha);
    let log_weights: Vec<f64> = drive
        .iter()
        .enumerate()
        .map(|(s, &g)| {
            if g == f64::NEG_INFINITY {
                f64::NEG_INFINITY
            } else {
                prior.prob(s).ln() + g / lambda
            }
        })
        .collect();

    let posterior = normalized_softmax(&log_weights)?;
    let params = AgentParams::new(lambda, alpha, utility)?;
    let breakdown = objective_value(&posterior, prior, lik, &params)?;
    Ok(UpdateResult {
        posterior,
        breakdown,
        method: SolveMethod::ClosedForm,
        convergence: None,
    })
}

/// Exponentiates and normalizes log weights; `-inf` entries keep zero mass.
fn normalized_softmax(log_weights: &[f64]) -> Result<Categorical> {
    let max = log_weights
        .iter()
        .copied()
        .filter(|w| w.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(Error::DegenerateProblem);
    }
    let weights: Vec<f64> = log_weights.iter().map(|&w| (w - max).exp()).collect();
    let normalizer: f64 = weights.iter().sum();
    Ok(Categorical::from_normalized(
        weights.into_iter().map(|w| w / normalizer).collect(),
    ))
}

// ---------------------------------------------------------------------------
// lambda -> 0 limit
// ---------------------------------------------------------------------------

/// Posterior in the `lambda -> 0+` limit, where belief change is free.
///
/// All mass lands on the states maximizing the drive `c_s + alpha *
/// ln lik(s)` within the prior's support. Exactly tied maximizers share
/// mass in proportion to the prior, matching the pointwise limit of the
/// closed form. The returned breakdown prices complexity at `lambda = 0`
/// (the divergence itself is still reported unweighted).
pub fn limit_update(
    prior: &Categorical,
    lik: &Likelihood,
    utility: &LinearAffectiveUtility,
    alpha: f64,
) -> Result<UpdateResult> {
    check_dims(prior, lik)?;
    if utility.n_states() != prior.n_states() {
        return Err(Error::DimensionMismatch {
            left: utility.n_states(),
            right: prior.n_states(),
        });
    }
    check_alpha(alpha)?;

    let drive = state_drive(prior, lik, utility, alpha);
    let best = drive
        .iter()
        .copied()
        .filter(|g| g.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    if best == f64::NEG_INFINITY {
        return Err(Error::DegenerateProblem);
    }

    let mut probs = vec![0.0; prior.n_states()];
    let mut mass = 0.0;
    for (s, &g) in drive.iter().enumerate() {
        if g == best {
            probs[s] = prior.prob(s);
            mass += prior.prob(s);
        }
    }
    for p in &mut probs {
        *p /= mass;
    }
    let posterior = Categorical::from_normalized(probs);
    let params = AgentParams::new(0.0, alpha, utility)?;
    let breakdown = objective_value(&posterior, prior, lik, &params)?;
    Ok(UpdateResult {
        posterior,
        breakdown,
        method: SolveMethod::LimitLambdaZero,
        convergence: None,
    })
}

// ---------------------------------------------------------------------------
// Logit-space objective and gradient (shared by the numeric solver and
// exposed for independent gradient verification)
// ---------------------------------------------------------------------------

/// Active coordinates for the logit parameterization: states the optimum
/// can actually occupy.
fn active_states(prior: &Categorical, lik: &Likelihood, alpha: f64) -> Vec<usize> {
    (0..prior.n_states())
        .filter(|&s| prior.prob(s) > 0.0 && (alpha == 0.0 || lik.value(s) > 0.0))
        .collect()
}

fn softmax_masked(theta: &[f64], active: &[usize], n: usize) -> Vec<f64> {
    let max = active
        .iter()
        .map(|&s| theta[s])
        .fold(f64::NEG_INFINITY, f64::max);
    let mut probs = vec![0.0; n];
    let mut normalizer = 0.0;
    for &s in active {
        let w = (theta[s] - max).exp();
        probs[s] = w;
        normalizer += w;
    }
    for &s in active {
        probs[s] /= normalizer;
    }
    probs
}

/// Objective value at the belief `softmax(theta)` restricted to the states
/// the optimum can occupy (prior support, minus observation-excluded states
/// when `alpha > 0`). `theta` is indexed by the full state space; entries
/// at excluded states are ignored.
pub fn logit_objective(
    prior: &Categorical,
    lik: &Likelihood,
    utility: &dyn UtilityFunctional,
    alpha: f64,
    lambda: f64,
    theta: &[f64],
) -> Result<f64> {
    check_dims(prior, lik)?;
    check_lambda_positive(lambda)?;
    check_alpha(alpha)?;
    if theta.len() != prior.n_states() {
        return Err(Error::DimensionMismatch {
            left: theta.len(),
            right: prior.n_states(),
        });
    }
    let active = active_states(prior, lik, alpha);
    if active.is_empty() {
        return Err(Error::DegenerateProblem);
    }
    let probs = softmax_masked(theta, &active, prior.n_states());
    Ok(objective_on_active(prior, lik, utility, alpha, lambda, &probs, &active))
}

fn objective_on_active(
    prior: &Categorical,
    lik: &Likelihood,
    utility: &dyn UtilityFunctional,
    alpha: f64,
    lambda: f64,
    probs: &[f64],
    active: &[usize],
) -> f64 {
    let q = Categorical::from_normalized(probs.to_vec());
    let mut value = utility.value(&q, ObservationTag::default());
    for &s in active {
        let qs = probs[s];
        if qs == 0.0 {
            continue;
        }
        if alpha != 0.0 {
            value += alpha * qs * lik.value(s).ln();
        }
        value -= lambda * qs * (qs / prior.prob(s)).ln();
    }
    value
}

/// Gradient of [`logit_objective`] with respect to `theta`.
///
/// Uses the utility's analytic gradient when available and central finite
/// differences (step `fd_step`) otherwise; the accuracy and complexity
/// parts are always analytic. The returned vector sums to zero — softmax
/// gradients live in the tangent space of the simplex — so its norm is the
/// projected gradient norm the solver tests for convergence.
pub fn logit_gradient(
    prior: &Categorical,
    lik: &Likelihood,
    utility: &dyn UtilityFunctional,
    alpha: f64,
    lambda: f64,
    theta: &[f64],
    fd_step: f64,
) -> Result<Vec<f64>> {
    check_dims(prior, lik)?;
    check_lambda_positive(lambda)?;
    check_alpha(alpha)?;
    if theta.len() != prior.n_states() {
        return Err(Error::DimensionMismatch {
            left: theta.len(),
            right: prior.n_states(),
        });
    }
    let active = active_states(prior, lik, alpha);
    if active.is_empty() {
        return Err(Error::DegenerateProblem);
    }
    let n = prior.n_states();
    let probs = softmax_masked(theta, &active, n);
    let (grad, _) = gradient_and_direction_at(
        prior, lik, utility, alpha, lambda, theta, &probs, &active, fd_step,
    );
    Ok(grad)
}

/// Core gradient and ascent-direction computation. `probs` must be
/// `softmax_masked(theta)`.
///
/// Returns `(grad, dir)` where `grad` is the logit-space gradient
/// `grad_k = q_k (h_k - E_q[h])` (the convergence certificate) and `dir` is
/// the mirror-ascent direction `dir_k = h_k - E_q[h]` — the gradient
/// preconditioned by `1/q_k`. The ascent steps along `dir` rather than
/// `grad` because the raw gradient's curvature per coordinate scales with
/// `q_k`: saturated coordinates (tiny `q_k`) would need step sizes millions
/// of times larger than the dominant coordinate tolerates, and a single
/// global step size stalls. Along `dir` every logit difference contracts at
/// the uniform rate `|1 - s * lambda|` for linear utilities, so conditioning
/// is independent of how saturated the optimum is. `dir` is computed
/// entirely in log space (`ln q_k = theta_k - logsumexp`), so it stays
/// finite even where `q_k` underflows to zero.
#[allow(clippy::too_many_arguments)]
fn gradient_and_direction_at(
    prior: &Categorical,
    lik: &Likelihood,
    utility: &dyn UtilityFunctional,
    alpha: f64,
    lambda: f64,
    theta: &[f64],
    probs: &[f64],
    active: &[usize],
    fd_step: f64,
) -> (Vec<f64>, Vec<f64>) {
    let n = prior.n_states();
    let q = Categorical::from_normalized(probs.to_vec());
    let analytic_du = utility.gradient(&q, ObservationTag::default());

    // ln q_s computed directly from the logits: exact where exp() would
    // underflow.
    let theta_max = active
        .iter()
        .map(|&s| theta[s])
        .fold(f64::NEG_INFINITY, f64::max);
    let log_normalizer: f64 = active
        .iter()
        .map(|&s| (theta[s] - theta_max).exp())
        .sum::<f64>()
        .ln();

    // Per-state sensitivity of the model terms (and the utility, when its
    // gradient is analytic): h_s = dU/dq_s + alpha ln lik_s - lambda ln(q_s/p_s).
    // Chain rule through softmax gives grad_k = q_k (h_k - E_q[h]).
    let mut h = vec![0.0; n];
    let mut mean_h = 0.0;
    for &s in active {
        let log_qs = theta[s] - theta_max - log_normalizer;
        let mut hs = -lambda * (log_qs - prior.prob(s).ln());
        if alpha != 0.0 {
            hs += alpha * lik.value(s).ln();
        }
        if let Some(du) = &analytic_du {
            hs += du[s];
        }
        h[s] = hs;
        mean_h += probs[s] * hs;
    }

    let mut grad = vec![0.0; n];
    let mut dir = vec![0.0; n];
    for &s in active {
        dir[s] = h[s] - mean_h;
        grad[s] = probs[s] * dir[s];
    }

    // Finite-difference fallback for the utility term only: perturb each
    // logit, re-normalize through the softmax, and difference the utility.
    // The direction picks the same term up divided by q_s; coordinates whose
    // mass has underflowed keep the model part of the direction alone.
    if analytic_du.is_none() {
        let mut theta_probe = theta.to_vec();
        for &s in active {
            theta_probe[s] = theta[s] + fd_step;
            let up = utility.value(
                &Categorical::from_normalized(softmax_masked(&theta_probe, active, n)),
                ObservationTag::default(),
            );
            theta_probe[s] = theta[s] - fd_step;
            let um = utility.value(
                &Categorical::from_normalized(softmax_masked(&theta_probe, active, n)),
                ObservationTag::default(),
            );
            theta_probe[s] = theta[s];
            let fd_term = (up - um) / (2.0 * fd_step);
            grad[s] += fd_term;
            if probs[s] > 0.0 {
                dir[s] += fd_term / probs[s];
            }
        }
    }
    (grad, dir)
}

// ---------------------------------------------------------------------------
// Numeric solver
// ---------------------------------------------------------------------------

/// Mirror ascent (exponentiated gradient) in logit space for arbitrary
/// utilities.
///
/// The posterior is parameterized as a softmax over the states the optimum
/// can occupy, so simplex constraints and the prior's support are enforced
/// by construction. Steps follow the preconditioned direction `h_k -
/// E_q[h]` rather than the raw gradient `q_k (h_k - E_q[h])`: the raw
/// gradient's per-coordinate curvature scales with `q_k`, so optima with
/// nearly-extinguished states are arbitrarily ill-conditioned for a single
/// global step size, while along the preconditioned direction every logit
/// difference contracts at the uniform rate `|1 - step * lambda|` for
/// linear utilities (at `step = 1/lambda` the update reproduces the exact
/// exponential-family solution in one move).
///
/// The ascent runs in two phases. First, backtracking line search on the
/// objective value with geometric step growth (accepted steps double;
/// rejected steps halve against an Armijo sufficient-increase test). A step
/// must buy a *measurably* positive improvement, so once improvements sink
/// below the value's own f64 rounding noise — which can happen while the
/// gradient norm is still around 1e-8 — the solver switches to accepting
/// steps that strictly contract the gradient norm, which is computed
/// directly rather than as a difference of near-equal values and therefore
/// stays measurable all the way down to tight tolerances.
///
/// Converges when the projected gradient norm drops below
/// `config.gradient_tolerance`; exhausting `config.max_iterations` first
/// yields [`Error::NotConverged`] carrying the best iterate found.
pub fn numeric_update(
    prior: &Categorical,
    lik: &Likelihood,
    utility: &dyn UtilityFunctional,
    alpha: f64,
    lambda: f64,
    config: &NumericSolverConfig,
) -> Result<UpdateResult> {
    check_dims(prior, lik)?;
    check_lambda_positive(lambda)?;
    check_alpha(alpha)?;
    config.validate()?;

    let n = prior.n_states();
    let active = active_states(prior, lik, alpha);
    if active.is_empty() {
        return Err(Error::DegenerateProblem);
    }

    let finish = |probs: Vec<f64>, convergence: Convergence| -> Result<UpdateResult> {
        let posterior = Categorical::from_normalized(probs);
        let params = AgentParams::new(lambda, alpha, utility)?;
        let breakdown = objective_value(&posterior, prior, lik, &params)?;
        Ok(UpdateResult {
            posterior,
            breakdown,
            method: SolveMethod::Numeric,
            convergence: Some(convergence),
        })
    };

    if active.len() == 1 {
        // Only one admissible state: the posterior is forced.
        let mut probs = vec![0.0; n];
        probs[active[0]] = 1.0;
        return finish(
            probs,
            Convergence {
                iterations: 0,
                gradient_norm: 0.0,
                converged: true,
            },
        );
    }

    // Start from the prior: it is feasible, and for the heavily tempered
    // problems where the objective is stiffest it is already near-optimal.
    let mut theta: Vec<f64> = (0..n)
        .map(|s| if prior.prob(s) > 0.0 { prior.prob(s).ln() } else { 0.0 })
        .collect();
    let mut probs = softmax_masked(&theta, &active, n);
    let mut value = objective_on_active(prior, lik, utility, alpha, lambda, &probs, &active);
    let mut step = config.step_size;
    let mut polish = false;

    const ARMIJO: f64 = 1e-4;
    const MIN_STEP: f64 = 1e-18;
    const MAX_STEP: f64 = 1e15;
    // Objective improvements below this fraction of the value's magnitude
    // are indistinguishable from f64 rounding noise, so the value-ascent
    // phase cannot certify them.
    const NOISE_FLOOR: f64 = 4.0 * f64::EPSILON;
    // A polish step must shrink the gradient norm by at least this factor
    // and may give back at most this much objective value (relative).
    const POLISH_CONTRACTION: f64 = 1e-9;
    const POLISH_SLACK: f64 = 1e-12;

    // Candidate one ascent step of size `s` away, re-centered so the
    // logits cannot drift toward overflow.
    let step_from = |theta: &[f64], dir: &[f64], s: f64| -> (Vec<f64>, Vec<f64>) {
        let mut candidate = theta.to_vec();
        for &k in &active {
            candidate[k] += s * dir[k];
        }
        let shift = active
            .iter()
            .map(|&k| candidate[k])
            .fold(f64::NEG_INFINITY, f64::max);
        for &k in &active {
            candidate[k] -= shift;
        }
        let cand_probs = softmax_masked(&candidate, &active, n);
        (candidate, cand_probs)
    };
    let l2 = |g: &[f64]| g.iter().map(|x| x * x).sum::<f64>().sqrt();

    for iteration in 0..config.max_iterations {
        let (grad, dir) = gradient_and_direction_at(
            prior,
            lik,
            utility,
            alpha,
            lambda,
            &theta,
            &probs,
            &active,
            config.finite_difference_step,
        );
        let gradient_norm = l2(&grad);
        if gradient_norm < config.gradient_tolerance {
            return finish(
                probs,
                Convergence {
                    iterations: iteration,
                    gradient_norm,
                    converged: true,
                },
            );
        }
        // Directional derivative of the objective along the ascent
        // direction: <grad, dir> = sum_k q_k dir_k^2 >= 0, the Armijo
        // slope for the preconditioned step.
        let slope: f64 = active.iter().map(|&k| grad[k] * dir[k]).sum();

        let mut accepted = false;

        if !polish {
            // Phase one: backtracking ascent on the objective value, with
            // geometric step growth on acceptance so long saturated
            // plateaus can be crossed. A step must buy a *measurably*
            // positive improvement — at least the Armijo amount and at
            // least the rounding noise of the value itself — so this phase
            // cannot wander forever on noise.
            while step >= MIN_STEP {
                let (candidate, cand_probs) = step_from(&theta, &dir, step);
                let cand_value =
                    objective_on_active(prior, lik, utility, alpha, lambda, &cand_probs, &active);
                let required =
                    (ARMIJO * step * slope).max(NOISE_FLOOR * (1.0 + value.abs()));
                if cand_value - value >= required {
                    theta = candidate;
                    probs = cand_probs;
                    value = cand_value;
                    step = (step * 2.0).min(MAX_STEP);
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                // The objective has flattened into rounding noise. Near a
                // concave optimum the gradient norm is still a measurable
                // progress signal (it is computed directly, not as a
                // difference of near-equal values), so switch to
                // contracting it instead.
                polish = true;
                step = 1.0;
            }
        }

        if polish {
            let mut trial = step;
            while trial >= MIN_STEP {
                let (candidate, cand_probs) = step_from(&theta, &dir, trial);
                let cand_value =
                    objective_on_active(prior, lik, utility, alpha, lambda, &cand_probs, &active);
                let (cand_grad, _) = gradient_and_direction_at(
                    prior,
                    lik,
                    utility,
                    alpha,
                    lambda,
                    &candidate,
                    &cand_probs,
                    &active,
                    config.finite_difference_step,
                );
                if l2(&cand_grad) < gradient_norm * (1.0 - POLISH_CONTRACTION)
                    && cand_value >= value - POLISH_SLACK * (1.0 + value.abs())
                {
                    theta = candidate;
                    probs = cand_probs;
                    value = cand_value;
                    step = (trial * 2.0).min(MAX_STEP);
                    accepted = true;
                    break;
                }
                trial *= 0.5;
            }
            if !accepted {
                // No representable step shrinks the gradient norm: the
                // iterate is at the numerical optimum but the requested
                // tolerance is finer than f64 can certify. Report honestly
                // rather than pretending the tolerance was met.
                let best = finish(
                    probs,
                    Convergence {
                        iterations: iteration,
                        gradient_norm,
                        converged: false,
                    },
                )?;
                return Err(Error::NotConverged {
                    iterations: iteration,
                    gradient_norm,
                    best: Box::new(best),
                });
            }
        }
    }

    let (grad, _) = gradient_and_direction_at(
        prior,
        lik,
        utility,
        alpha,
        lambda,
        &theta,
        &probs,
        &active,
        config.finite_difference_step,
    );
    let gradient_norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
    if gradient_norm < config.gradient_tolerance {
        return finish(
            probs,
            Convergence {
                iterations: config.max_iterations,
                gradient_norm,
                converged: true,
            },
        );
    }
    let best = finish(
        probs,
        Convergence {
            iterations: config.max_iterations,
            gradient_norm,
            converged: false,
        },
    )?;
    Err(Error::NotConverged {
        iterations: config.max_iterations,
        gradient_norm,
        best: Box::new(best),
    })
}

// ---------------------------------------------------------------------------
// Brute force
// ---------------------------------------------------------------------------

/// Exhaustive grid search over two-state posteriors.
///
/// Walks `q(0)` over `{0, grid_step, 2*grid_step, ..., 1}` intersected with
/// the prior's support, evaluates the objective at every point, and keeps
/// the best; exact ties resolve toward the smaller `q(0)`. `grid_step` must
/// lie in `(0, 0.01]` — any coarser and the answer is not worth trusting.
/// Accepts `lambda = 0` (the grid does not care that the limit solver
/// exists); negative `lambda` is rejected.
pub fn brute_force_update(
    prior: &Categorical,
    lik: &Likelihood,
    utility: &dyn UtilityFunctional,
    alpha: f64,
    lambda: f64,
    grid_step: f64,
) -> Result<UpdateResult> {
    check_dims(prior, lik)?;
    if prior.n_states() != 2 {
        return Err(Error::UnsupportedDimension(prior.n_states()));
    }
    if !(grid_step > 0.0 && grid_step <= 0.01) {
        return Err(Error::InvalidParameter {
            name: "grid_step",
            value: grid_step,
            message: "must lie in (0, 0.01]",
        });
    }
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::LambdaNonPositive(lambda));
    }
    check_alpha(alpha)?;

    let params = AgentParams::new(lambda, alpha, utility)?;

    // Candidate grid for q(0), restricted to the prior's support.
    let candidates: Vec<f64> = if prior.prob(0) == 0.0 {
        vec![0.0]
    } else if prior.prob(1) == 0.0 {
        vec![1.0]
    } else {
        let mut points = Vec::with_capacity((1.0 / grid_step) as usize + 2);
        let mut k = 0u64;
        loop {
            let q0 = k as f64 * grid_step;
            if q0 >= 1.0 {
                break;
            }
            points.push(q0);
            k += 1;
        }
        points.push(1.0);
        points
    };

    let mut best: Option<(f64, UpdateResult)> = None;
    for q0 in candidates {
        let q = Categorical::new(vec![q0, 1.0 - q0])?;
        let breakdown = objective_value(&q, prior, lik, &params)?;
        let better = match &best {
            None => true,
            // Strict comparison keeps the earlier (smaller q0) candidate on
            // ties; -inf totals lose to anything finite automatically.
            Some((best_total, _)) => breakdown.total > *best_total,
        };
        if better {
            best = Some((
                breakdown.total,
                UpdateResult {
                    posterior: q,
                    breakdown,
                    method: SolveMethod::BruteForce,
                    convergence: None,
                },
            ));
        }
    }
    Ok(best.expect("candidate grid is never empty").1)
}

// ---------------------------------------------------------------------------
// Convenience dispatch
// ---------------------------------------------------------------------------

/// Solves a linear-utility update, routing `lambda = 0` to [`limit_update`]
/// and everything else to [`closed_form_update`]. This is what the sweep
/// harness uses so that grids may start at zero.
pub fn linear_update(
    prior: &Categorical,
    lik: &Likelihood,
    utility: &LinearAffectiveUtility,
    alpha: f64,
    lambda: f64,
) -> Result<UpdateResult> {
    if lambda == 0.0 {
        limit_update(prior, lik, utility, alpha)
    } else {
        closed_form_update(prior, lik, utility, alpha, lambda)
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
