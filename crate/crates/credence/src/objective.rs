//! The motivated-update objective and its decomposition.
//!
//! An agent holding prior `p` who receives an observation with per-state
//! likelihood `lik` scores a candidate posterior `q` as
//!
//! ```text
//! total(q) = U[q, o] + alpha * E_q[ln lik] - lambda * KL(q || p)
//! ```
//!
//! The three pieces are the affective utility of holding the belief, an
//! accuracy bonus for beliefs that explain the observation, and a
//! complexity penalty for straying from the prior. `alpha` weights accuracy
//! against desirability; `lambda` prices belief change. With constant
//! utility and `alpha = lambda = 1` the total is, up to that constant, the
//! negative of the usual variational free energy, so plain Bayesian
//! conditioning is recovered as a special case.

use crate::belief::{expected_log_likelihood, kl_divergence, Categorical, Likelihood};
use crate::error::{Error, Result};

/// Opaque identifier for the observation an update responds to.
///
/// The utility functional is allowed to depend on which observation was
/// made, so the tag is threaded through to it. All bundled experiments use
/// observation-independent utilities and leave it at the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ObservationTag(pub u64);

/// A functional scoring how much the agent likes holding belief `q` after
/// observation `observation`.
pub trait UtilityFunctional: Sync {
    /// Utility of holding `q`, in the same (nat-denominated) units as the
    /// accuracy and complexity terms.
    fn value(&self, q: &Categorical, observation: ObservationTag) -> f64;

    /// Gradient of the utility with respect to the belief probabilities,
    /// when a closed form is available. Solvers fall back to central finite
    /// differences when this returns `None`.
    fn gradient(&self, q: &Categorical, observation: ObservationTag) -> Option<Vec<f64>> {
        let _ = (q, observation);
        None
    }
}

/// Linear affective utility `U[q] = sum_s c_s q(s)`.
///
/// This is the workhorse form: a per-state desirability vector. It is the
/// only form with a closed-form posterior, and every bundled experiment
/// uses it.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearAffectiveUtility {
    coeffs: Vec<f64>,
}

impl LinearAffectiveUtility {
    /// Validates and wraps a per-state desirability vector.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        for (index, &value) in coeffs.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "coefficient",
                    value,
                    message: "utility coefficients must be finite",
                });
            }
            let _ = index;
        }
        Ok(Self { coeffs })
    }

    /// Constant utility `c_s = value` for every state. Constant utilities
    /// leave the posterior untouched relative to plain conditioning.
    pub fn constant(n_states: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n_states])
    }

    /// The desirability vector.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Number of states covered.
    pub fn n_states(&self) -> usize {
        self.coeffs.len()
    }
}

impl UtilityFunctional for LinearAffectiveUtility {
    fn value(&self, q: &Categorical, _observation: ObservationTag) -> f64 {
        assert_eq!(
            self.coeffs.len(),
            q.n_states(),
            "utility and belief state spaces must match"
        );
        self.coeffs
            .iter()
            .zip(q.probs())
            .map(|(&c, &p)| c * p)
            .sum()
    }

    fn gradient(&self, _q: &Categorical, _observation: ObservationTag) -> Option<Vec<f64>> {
        Some(self.coeffs.clone())
    }
}

/// Adapter turning a plain closure into a [`UtilityFunctional`]. Handy for
/// one-off nonlinear utilities in tests and exploratory code.
pub struct FnUtility<F: Fn(&Categorical) -> f64 + Sync>(pub F);

impl<F: Fn(&Categorical) -> f64 + Sync> UtilityFunctional for FnUtility<F> {
    fn value(&self, q: &Categorical, _observation: ObservationTag) -> f64 {
        (self.0)(q)
    }
}

/// Evaluates a linear utility against a belief, checking dimensions.
pub fn affective_utility_value(utility: &LinearAffectiveUtility, q: &Categorical) -> Result<f64> {
    if utility.n_states() != q.n_states() {
        return Err(Error::DimensionMismatch {
            left: utility.n_states(),
            right: q.n_states(),
        });
    }
    Ok(utility.value(q, ObservationTag::default()))
}

/// The weights and utility an agent applies when revising beliefs.
///
/// `lambda >= 0` prices divergence from the prior, `alpha >= 0` weights
/// accuracy. `lambda = 0` is accepted here because the objective itself is
/// well defined there; the positive-lambda solvers check their own bound.
pub struct AgentParams<'u> {
    pub lambda: f64,
    pub alpha: f64,
    pub utility: &'u dyn UtilityFunctional,
    pub observation: ObservationTag,
}

impl<'u> AgentParams<'u> {
    /// Validates the weights and bundles them with a utility.
    pub fn new(lambda: f64, alpha: f64, utility: &'u dyn UtilityFunctional) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                message: "must be finite and non-negative",
            });
        }
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                message: "must be finite and non-negative",
            });
        }
        Ok(Self {
            lambda,
            alpha,
            utility,
            observation: ObservationTag::default(),
        })
    }

    /// Same parameters, different observation tag.
    pub fn with_observation(mut self, observation: ObservationTag) -> Self {
        self.observation = observation;
        self
    }
}

/// The objective split into its three ingredients plus their weighted sum.
///
/// `accuracy` and `complexity` are stored unweighted; `total` applies the
/// agent's `alpha` and `lambda`. `accuracy` may be negative infinity when
/// the belief keeps mass on a state the observation rules out; in that case
/// `total` is negative infinity too (for positive `alpha`), which sorts
/// below every finite total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveBreakdown {
    pub affective_utility: f64,
    pub accuracy: f64,
    pub complexity: f64,
    pub total: f64,
}

impl ObjectiveBreakdown {
    /// Recombines the parts into a total under the crate's weighting
    /// conventions: a zero weight annihilates its term even when the term
    /// is infinite, so `alpha = 0` silences an infinitely inaccurate belief
    /// instead of poisoning the sum with NaN.
    pub fn recombine(&self, alpha: f64, lambda: f64) -> f64 {
        combine(self.affective_utility, self.accuracy, self.complexity, alpha, lambda)
    }
}

fn combine(affective: f64, accuracy: f64, complexity: f64, alpha: f64, lambda: f64) -> f64 {
    let mut total = affective;
    if alpha != 0.0 {
        total += alpha * accuracy;
    }
    if lambda != 0.0 {
        total -= lambda * complexity;
    }
    total
}

/// Scores a candidate posterior against a prior and an observation.
///
/// Requires `q` to stay within the support of `prior` (otherwise the
/// complexity term is infinite and the candidate is inadmissible, reported
/// as [`Error::SupportViolation`]).
pub fn objective_value(
    q: &Categorical,
    prior: &Categorical,
    lik: &Likelihood,
    params: &AgentParams<'_>,
) -> Result<ObjectiveBreakdown> {
    let n = prior.n_states();
    if q.n_states() != n {
        return Err(Error::DimensionMismatch {
            left: q.n_states(),
            right: n,
        });
    }
    if lik.n_states() != n {
        return Err(Error::DimensionMismatch {
            left: lik.n_states(),
            right: n,
        });
    }
    let complexity = kl_divergence(q, prior)?;
    let accuracy = expected_log_likelihood(q, lik);
    let affective_utility = params.utility.value(q, params.observation);
    let total = combine(affective_utility, accuracy, complexity, params.alpha, params.lambda);
    Ok(ObjectiveBreakdown {
        affective_utility,
        accuracy,
        complexity,
        total,
    })
}

/// Variational free energy of `q` for the generative model
/// `p(s, o) = prior(s) * lik(s)`:
///
/// ```text
/// F[q] = -E_q[ln lik] + KL(q || prior)
/// ```
///
/// Equivalently energy minus entropy, `-E_q[ln p(s, o)] - H[q]`. Minimizing
/// it over `q` recovers the Bayesian posterior. The value may be positive
/// infinity when `q` keeps mass on a ruled-out state; mass outside the
/// prior's support is a [`Error::SupportViolation`].
pub fn vfe_value(q: &Categorical, prior: &Categorical, lik: &Likelihood) -> Result<f64> {
    let n = prior.n_states();
    if q.n_states() != n {
        return Err(Error::DimensionMismatch {
            left: q.n_states(),
            right: n,
        });
    }
    if lik.n_states() != n {
        return Err(Error::DimensionMismatch {
            left: lik.n_states(),
            right: n,
        });
    }
    let complexity = kl_divergence(q, prior)?;
    let accuracy = expected_log_likelihood(q, lik);
    Ok(complexity - accuracy)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::{bayes_update, entropy};

    fn cat(probs: &[f64]) -> Categorical {
        Categorical::new(probs.to_vec()).unwrap()
    }

    fn lik(values: &[f64]) -> Likelihood {
        Likelihood::new(values.to_vec()).unwrap()
    }

    fn linear(coeffs: &[f64]) -> LinearAffectiveUtility {
        LinearAffectiveUtility::new(coeffs.to_vec()).unwrap()
    }

    #[test]
    fn linear_utility_is_the_expected_coefficient() {
        let u = linear(&[1.0, 0.0]);
        let v = affective_utility_value(&u, &cat(&[0.3, 0.7])).unwrap();
        assert!((v - 0.3).abs() < 1e-15);
    }

    #[test]
    fn utility_dimension_mismatch_is_reported() {
        let u = linear(&[1.0, 0.0, 0.0]);
        assert!(matches!(
            affective_utility_value(&u, &cat(&[0.3, 0.7])).unwrap_err(),
            Error::DimensionMismatch { left: 3, right: 2 }
        ));
    }

    #[test]
    fn utility_rejects_non_finite_coefficients() {
        assert!(LinearAffectiveUtility::new(vec![f64::NAN, 0.0]).is_err());
        assert!(LinearAffectiveUtility::new(vec![f64::INFINITY, 0.0]).is_err());
    }

    #[test]
    fn breakdown_hand_value_at_the_prior() {
        // q = prior, uninformative evidence: complexity is exactly zero and
        // total = c0 * 0.3 + ln 0.5.
        let prior = cat(&[0.3, 0.7]);
        let u = linear(&[1.0, 0.0]);
        let params = AgentParams::new(5.0, 1.0, &u).unwrap();
        let b = objective_value(&prior, &prior, &lik(&[0.5, 0.5]), &params).unwrap();
        assert_eq!(b.complexity, 0.0);
        assert!((b.affective_utility - 0.3).abs() < 1e-15);
        assert!((b.total - (0.3 + 0.5f64.ln())).abs() < 1e-12, "got {}", b.total);
    }

    #[test]
    fn total_recombines_from_parts() {
        let q = cat(&[0.6, 0.4]);
        let prior = cat(&[0.3, 0.7]);
        let u = linear(&[2.0, -1.0]);
        let params = AgentParams::new(3.0, 2.0, &u).unwrap();
        let b = objective_value(&q, &prior, &lik(&[0.8, 0.1]), &params).unwrap();
        assert!((b.total - b.recombine(2.0, 3.0)).abs() < 1e-12);
    }

    #[test]
    fn ruled_out_state_with_positive_alpha_gives_minus_inf_total() {
        let q = cat(&[0.5, 0.5]);
        let prior = cat(&[0.5, 0.5]);
        let u = linear(&[0.0, 0.0]);
        let params = AgentParams::new(1.0, 1.0, &u).unwrap();
        let b = objective_value(&q, &prior, &lik(&[0.0, 1.0]), &params).unwrap();
        assert_eq!(b.accuracy, f64::NEG_INFINITY);
        assert_eq!(b.total, f64::NEG_INFINITY);
        // -inf totals sort below every finite total.
        assert!(b.total < -1e300);
    }

    #[test]
    fn zero_alpha_silences_an_infinite_accuracy_term() {
        let q = cat(&[0.5, 0.5]);
        let prior = cat(&[0.5, 0.5]);
        let u = linear(&[1.0, 0.0]);
        let params = AgentParams::new(1.0, 0.0, &u).unwrap();
        let b = objective_value(&q, &prior, &lik(&[0.0, 1.0]), &params).unwrap();
        assert_eq!(b.accuracy, f64::NEG_INFINITY);
        assert!(b.total.is_finite());
        assert!((b.total - 0.5).abs() < 1e-15);
    }

    #[test]
    fn support_violation_is_an_error_not_a_value() {
        let q = cat(&[0.5, 0.5]);
        let prior = cat(&[1.0, 0.0]);
        let u = linear(&[0.0, 0.0]);
        let params = AgentParams::new(1.0, 1.0, &u).unwrap();
        assert!(matches!(
            objective_value(&q, &prior, &lik(&[0.5, 0.5]), &params).unwrap_err(),
            Error::SupportViolation { index: 1 }
        ));
    }

    #[test]
    fn params_validate_their_weights() {
        let u = linear(&[0.0, 0.0]);
        assert!(AgentParams::new(-1.0, 1.0, &u).is_err());
        assert!(AgentParams::new(1.0, -0.5, &u).is_err());
        assert!(AgentParams::new(f64::NAN, 1.0, &u).is_err());
        assert!(AgentParams::new(0.0, 0.0, &u).is_ok());
    }

    #[test]
    fn vfe_matches_energy_minus_entropy() {
        let q = cat(&[0.4, 0.6]);
        let prior = cat(&[0.3, 0.7]);
        let l = lik(&[0.8, 0.2]);
        let direct = vfe_value(&q, &prior, &l).unwrap();
        // Energy form: -E_q[ln(prior * lik)] - H[q].
        let energy: f64 = q
            .probs()
            .iter()
            .zip(prior.probs().iter().zip(l.values()))
            .filter(|(&qs, _)| qs > 0.0)
            .map(|(&qs, (&ps, &ls))| -qs * (ps * ls).ln())
            .sum();
        let alt = energy - entropy(&q);
        assert!((direct - alt).abs() < 1e-10, "{direct} vs {alt}");
    }

    #[test]
    fn vfe_with_uninformative_evidence_is_the_divergence_from_prior() {
        let q = cat(&[1.0, 0.0]);
        let prior = cat(&[0.5, 0.5]);
        let v = vfe_value(&q, &prior, &lik(&[1.0, 1.0])).unwrap();
        assert!((v - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn bayes_posterior_minimizes_the_vfe_on_a_dense_grid() {
        let prior = cat(&[0.3, 0.7]);
        let l = lik(&[0.9, 0.1]);
        let bayes = bayes_update(&prior, &l).unwrap();

        let mut best_q0 = f64::NAN;
        let mut best = f64::INFINITY;
        let mut q0 = 0.0;
        while q0 <= 1.0 {
            let q = cat(&[q0, 1.0 - q0]);
            let v = vfe_value(&q, &prior, &l).unwrap();
            if v < best {
                best = v;
                best_q0 = q0;
            }
            q0 += 1e-4;
        }
        assert!(
            (best_q0 - bayes.prob(0)).abs() <= 1e-4,
            "grid minimum {best_q0} vs bayes {}",
            bayes.prob(0)
        );
    }

    #[test]
    fn constant_utility_unit_weights_total_is_constant_minus_vfe() {
        let q = cat(&[0.45, 0.55]);
        let prior = cat(&[0.3, 0.7]);
        let l = lik(&[0.6, 0.4]);
        let k = 2.5;
        let u = LinearAffectiveUtility::constant(2, k).unwrap();
        let params = AgentParams::new(1.0, 1.0, &u).unwrap();
        let total = objective_value(&q, &prior, &l, &params).unwrap().total;
        let vfe = vfe_value(&q, &prior, &l).unwrap();
        assert!((total - (k - vfe)).abs() < 1e-12, "{total} vs {}", k - vfe);
    }

    #[test]
    fn shifting_every_coefficient_shifts_the_total_by_the_same_amount() {
        let q = cat(&[0.25, 0.75]);
        let prior = cat(&[0.5, 0.5]);
        let l = lik(&[0.7, 0.2]);
        let k = 3.0;
        let base = linear(&[1.0, -2.0]);
        let shifted = linear(&[1.0 + k, -2.0 + k]);
        let pb = AgentParams::new(2.0, 1.5, &base).unwrap();
        let ps = AgentParams::new(2.0, 1.5, &shifted).unwrap();
        let tb = objective_value(&q, &prior, &l, &pb).unwrap().total;
        let ts = objective_value(&q, &prior, &l, &ps).unwrap().total;
        assert!((ts - tb - k).abs() < 1e-12);
    }

    #[test]
    fn closure_utilities_plug_in_through_the_trait() {
        let u = FnUtility(|q: &Categorical| -(q.prob(0) - 0.8).powi(2));
        let q = cat(&[0.8, 0.2]);
        assert_eq!(u.value(&q, ObservationTag::default()), 0.0);
        assert!(u.gradient(&q, ObservationTag::default()).is_none());
    }
}
