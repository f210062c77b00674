//! Categorical beliefs and the information-theoretic primitives over them.
//!
//! Everything in this crate works with finite categorical distributions and
//! natural-log units (nats). The two value types here, [`Categorical`] and
//! [`Likelihood`], validate on construction so the layers above can consume
//! them without re-checking. Throughout, the measure-theoretic convention
//! `0 * ln 0 = 0` applies: states with zero belief mass contribute nothing
//! to entropies, divergences, or expected log-likelihoods.

use crate::error::{Error, Result};

/// Absolute tolerance within which a probability vector sums to one after
/// construction.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Inputs whose sum deviates from one by less than this are renormalized;
/// larger deviations are rejected as data errors rather than rounding noise.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-6;

// ---------------------------------------------------------------------------
// Value types
// ---------------------------------------------------------------------------

/// A normalized probability vector over a finite state space.
///
/// Invariants held after construction: at least two states, every entry
/// finite and non-negative, entries summing to one within [`SUM_TOLERANCE`].
#[derive(Debug, Clone, PartialEq)]
pub struct Categorical {
    probs: Vec<f64>,
}

impl Categorical {
    /// Builds a distribution from raw probabilities.
    ///
    /// Sums within [`RENORMALIZE_TOLERANCE`] of one are renormalized so that
    /// accumulated rounding from upstream arithmetic is absorbed; anything
    /// further off is rejected.
    ///
    /// ```
    /// use credence::Categorical;
    /// let q = Categorical::new(vec![0.3, 0.7]).unwrap();
    /// assert_eq!(q.prob(0), 0.3);
    /// ```
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::TooFewStates(probs.len()));
        }
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if !sum.is_finite() || (sum - 1.0).abs() >= RENORMALIZE_TOLERANCE {
            return Err(Error::NotNormalized { sum });
        }
        let mut probs = probs;
        if sum != 1.0 {
            for p in &mut probs {
                *p /= sum;
            }
        }
        Ok(Self { probs })
    }

    /// Uniform distribution over `n_states` states.
    pub fn uniform(n_states: usize) -> Result<Self> {
        if n_states < 2 {
            return Err(Error::TooFewStates(n_states));
        }
        Self::new(vec![1.0 / n_states as f64; n_states])
    }

    /// Point mass on `state`.
    pub fn delta(n_states: usize, state: usize) -> Result<Self> {
        if n_states < 2 {
            return Err(Error::TooFewStates(n_states));
        }
        let mut probs = vec![0.0; n_states];
        probs[state] = 1.0;
        Self::new(probs)
    }

    /// Wraps a vector that is already normalized by construction (used by
    /// the solvers, which produce explicitly normalized output).
    pub(crate) fn from_normalized(probs: Vec<f64>) -> Self {
        debug_assert!(probs.len() >= 2);
        debug_assert!(
            (probs.iter().sum::<f64>() - 1.0).abs() < SUM_TOLERANCE,
            "solver produced an unnormalized vector"
        );
        Self { probs }
    }

    /// The probability vector.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of states in the space.
    pub fn n_states(&self) -> usize {
        self.probs.len()
    }

    /// Probability of a single state. Panics if `state` is out of range.
    pub fn prob(&self, state: usize) -> f64 {
        self.probs[state]
    }

    /// Indices of the states carrying strictly positive mass.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(s, _)| s)
    }
}

/// Per-state probabilities of one fixed observation: `values[s] = p(o | s)`.
///
/// Entries live in `[0, 1]` and at least one must be strictly positive.
/// The entries need not (and generally do not) sum to one: they are one
/// column of an observation model, not a distribution over states.
#[derive(Debug, Clone, PartialEq)]
pub struct Likelihood {
    values: Vec<f64>,
}

impl Likelihood {
    /// Validates and wraps per-state observation probabilities.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(Error::LikelihoodOutOfRange { index, value });
            }
        }
        if !values.iter().any(|&v| v > 0.0) {
            return Err(Error::AllZeroLikelihood);
        }
        Ok(Self { values })
    }

    /// The per-state values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of states covered.
    pub fn n_states(&self) -> usize {
        self.values.len()
    }

    /// Value for a single state. Panics if `state` is out of range.
    pub fn value(&self, state: usize) -> f64 {
        self.values[state]
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

fn check_dims(left: usize, right: usize) {
    assert_eq!(
        left, right,
        "state spaces must match: {left} states vs {right}"
    );
}

/// Kullback-Leibler divergence `KL(q || p)` in nats.
///
/// States with `q(s) = 0` contribute zero regardless of `p(s)`. Mass outside
/// the support of `p` makes the divergence infinite and is reported as
/// [`Error::SupportViolation`] instead of returning an infinity.
pub fn kl_divergence(q: &Categorical, p: &Categorical) -> Result<f64> {
    check_dims(q.n_states(), p.n_states());
    let mut total = 0.0;
    for (index, (&qs, &ps)) in q.probs().iter().zip(p.probs()).enumerate() {
        if qs == 0.0 {
            continue;
        }
        if ps == 0.0 {
            return Err(Error::SupportViolation { index });
        }
        total += qs * (qs / ps).ln();
    }
    Ok(total)
}

/// Shannon entropy `H[q]` in nats. Always finite and non-negative.
pub fn entropy(q: &Categorical) -> f64 {
    let mut total = 0.0;
    for &qs in q.probs() {
        if qs > 0.0 {
            total -= qs * qs.ln();
        }
    }
    total
}

/// Expected log-likelihood `E_q[ln p(o | s)]` in nats.
///
/// Returns negative infinity when `q` places mass on a state the
/// observation rules out (`lik(s) = 0`). That is a legitimate value — such
/// a belief is infinitely inaccurate — so it is returned, not an error.
/// States with `q(s) = 0` contribute zero even when their likelihood is zero.
pub fn expected_log_likelihood(q: &Categorical, lik: &Likelihood) -> f64 {
    check_dims(q.n_states(), lik.n_states());
    let mut total = 0.0;
    for (&qs, &ls) in q.probs().iter().zip(lik.values()) {
        if qs == 0.0 {
            continue;
        }
        // ln(0) = -inf propagates through the sum without producing NaN
        // because the qs = 0 terms were already skipped.
        total += qs * ls.ln();
    }
    total
}

/// Standard Bayesian conditioning: `posterior(s) ∝ prior(s) * lik(s)`.
///
/// Fails with [`Error::ZeroEvidence`] when the observation has zero
/// probability under the prior (the normalizer vanishes).
pub fn bayes_update(prior: &Categorical, lik: &Likelihood) -> Result<Categorical> {
    check_dims(prior.n_states(), lik.n_states());
    let weights: Vec<f64> = prior
        .probs()
        .iter()
        .zip(lik.values())
        .map(|(&p, &l)| p * l)
        .collect();
    let normalizer: f64 = weights.iter().sum();
    if normalizer <= 0.0 {
        return Err(Error::ZeroEvidence);
    }
    Ok(Categorical::from_normalized(
        weights.into_iter().map(|w| w / normalizer).collect(),
    ))
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
