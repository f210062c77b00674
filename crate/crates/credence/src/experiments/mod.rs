//! Parameter sweeps and scenario runners built on the solvers.
//!
//! Everything here answers the same kind of question — *how does the
//! motivated posterior move as the agent's parameters move?* — and returns
//! the answer as a [`SweepResult`]: a flat, row-major table over named
//! axes, ready for serialization or plotting.
//!
//! The sweep families:
//!
//! * [`evidence_strength_sweep`] — posterior response ([`linear_update`])
//!   as Bernoulli evidence strength varies, per (λ, α) cell, with the
//!   Bayes posterior as a reference column.
//! * [`select_evidence`] / [`selection_threshold`] /
//!   [`selection_objective_sweep`] — which of several evidence options an
//!   agent prefers to observe, and the tempering weight λ* at which that
//!   preference flips.
//! * [`objective_landscape_heatmap`] / [`selection_boundary_heatmap`] —
//!   per-(λ, α) cell summaries of the optimal objective and of two-option
//!   preference.
//! * [`polarization_sweep`] — two agents with opposed linear preferences
//!   see the same evidence; the gap between their posteriors measures
//!   attitude polarization.
//!
//! Grid cells are evaluated independently (in parallel when the `parallel`
//! feature is on) and assembled in row-major axis order, so results are
//! deterministic regardless of scheduling.

pub mod grid;

pub use grid::{linspace, logspace, PARALLEL_THRESHOLD};

use crate::belief::{bayes_update, Categorical, Likelihood};
use crate::error::{Error, Result};
use crate::objective::LinearAffectiveUtility;
use crate::solver::{linear_update, UpdateResult};

// ---------------------------------------------------------------------------
// Evidence
// ---------------------------------------------------------------------------

/// A one-parameter family of two-state likelihoods: strength `e` means
/// `p(o | s=0) = e` and `p(o | s=1) = 1 - e`.
///
/// Under this complementary convention `e = 0.5` is exactly uninformative,
/// `e > 0.5` favors state 0, and `e < 0.5` favors state 1. Strengths are
/// clamped into `[0.01, 0.99]` by default — log-likelihoods diverge at the
/// exact endpoints — with custom bounds available through
/// [`BernoulliEvidence::with_bounds`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernoulliEvidence {
    strength: f64,
}

impl BernoulliEvidence {
    /// Default lower clamp for the strength.
    pub const DEFAULT_MIN: f64 = 0.01;
    /// Default upper clamp for the strength.
    pub const DEFAULT_MAX: f64 = 0.99;

    /// Evidence of the given strength, clamped to the default bounds.
    pub fn new(strength: f64) -> Result<Self> {
        Self::with_bounds(strength, Self::DEFAULT_MIN, Self::DEFAULT_MAX)
    }

    /// Evidence clamped into `[min, max]`, which must satisfy
    /// `0 <= min <= max <= 1`.
    pub fn with_bounds(strength: f64, min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && 0.0 <= min && min <= max && max <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "evidence_bounds",
                value: min,
                message: "bounds must satisfy 0 <= min <= max <= 1",
            });
        }
        if !strength.is_finite() {
            return Err(Error::InvalidParameter {
                name: "evidence_strength",
                value: strength,
                message: "must be finite",
            });
        }
        Ok(Self {
            strength: strength.clamp(min, max),
        })
    }

    /// The (possibly clamped) strength `e`.
    pub fn strength(self) -> f64 {
        self.strength
    }

    /// The two-state likelihood `(e, 1 - e)`.
    pub fn likelihood(self) -> Likelihood {
        Likelihood::new(vec![self.strength, 1.0 - self.strength])
            .expect("a clamped strength always yields a valid likelihood")
    }

    /// `points` evidence levels evenly spaced over the default bounds.
    pub fn default_grid(points: usize) -> Vec<BernoulliEvidence> {
        linspace(Self::DEFAULT_MIN, Self::DEFAULT_MAX, points)
            .into_iter()
            .map(|e| Self::new(e).expect("grid values are finite"))
            .collect()
    }
}

/// One observable piece of evidence an agent may choose to look at.
#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceOption {
    pub label: String,
    pub lik: Likelihood,
}

impl EvidenceOption {
    pub fn new(label: impl Into<String>, lik: Likelihood) -> Self {
        Self {
            label: label.into(),
            lik,
        }
    }
}

// ---------------------------------------------------------------------------
// Sweep results
// ---------------------------------------------------------------------------

/// How an axis's values were spaced; a rendering hint for plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisScale {
    Linear,
    Log10,
}

/// One named parameter grid of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
    pub scale: AxisScale,
}

impl Axis {
    pub fn linear(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            values,
            scale: AxisScale::Linear,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Which family of sweep produced a [`SweepResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    EvidenceStrength,
    ObjectiveLandscape,
    SelectionCurve,
    SelectionBoundary,
    Polarization,
}

impl SweepKind {
    /// Stable lowercase name, used in serialized output.
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::EvidenceStrength => "evidence_strength",
            SweepKind::ObjectiveLandscape => "objective_landscape",
            SweepKind::SelectionCurve => "selection_curve",
            SweepKind::SelectionBoundary => "selection_boundary",
            SweepKind::Polarization => "polarization",
        }
    }
}

/// A completed sweep: named axes plus one row of column values per grid
/// cell, in row-major axis order (the last axis varies fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub axes: Vec<Axis>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepResult {
    /// Product of the axis lengths; always equals `rows.len()`.
    pub fn n_cells(&self) -> usize {
        self.axes.iter().map(Axis::len).product()
    }

    /// Looks up an axis by name.
    pub fn axis_named(&self, name: &str) -> Option<&Axis> {
        self.axes.iter().find(|a| a.name == name)
    }

    /// Looks up a column index by name.
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// The coordinates (one value per axis) of the cell behind row `index`.
    pub fn coords(&self, index: usize) -> Vec<f64> {
        let mut rem = index;
        let mut out = vec![0.0; self.axes.len()];
        for k in (0..self.axes.len()).rev() {
            let len = self.axes[k].len();
            out[k] = self.axes[k].values[rem % len];
            rem /= len;
        }
        out
    }
}

/// Shared driver: decodes row-major cell indices into per-axis coordinates
/// and evaluates every cell through [`grid::map_cells`].
fn run_sweep<F>(
    kind: SweepKind,
    axes: Vec<Axis>,
    columns: &[&str],
    eval: F,
) -> Result<SweepResult>
where
    F: Fn(&[f64]) -> Result<Vec<f64>> + Sync,
{
    let lens: Vec<usize> = axes.iter().map(Axis::len).collect();
    let n: usize = lens.iter().product();
    let rows = grid::map_cells(n, |index| {
        let mut rem = index;
        let mut coords = vec![0.0; lens.len()];
        for k in (0..lens.len()).rev() {
            coords[k] = axes[k].values[rem % lens[k]];
            rem /= lens[k];
        }
        let row = eval(&coords)?;
        debug_assert_eq!(row.len(), columns.len());
        Ok(row)
    })?;
    Ok(SweepResult {
        kind,
        axes,
        columns: columns.iter().map(|c| c.to_string()).collect(),
        rows,
    })
}

fn require_nonempty(name: &'static str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        Err(Error::EmptyGrid { name })
    } else {
        Ok(())
    }
}

fn require_two_state(prior: &Categorical) -> Result<()> {
    if prior.n_states() != 2 {
        return Err(Error::DimensionMismatch {
            left: prior.n_states(),
            right: 2,
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Evidence-strength response curves
// ---------------------------------------------------------------------------

/// Column names shared by the response-curve and landscape sweeps.
const POSTERIOR_COLUMNS: [&str; 6] = [
    "posterior_q0",
    "bayes_q0",
    "utility",
    "accuracy",
    "complexity",
    "total",
];

fn posterior_row(update: &UpdateResult, bayes: &Categorical) -> Vec<f64> {
    let b = update.breakdown;
    vec![
        update.posterior.prob(0),
        bayes.prob(0),
        b.affective_utility,
        b.accuracy,
        b.complexity,
        b.total,
    ]
}

/// Posterior response to evidence strength, per (λ, α) cell.
///
/// Axes, in row-major order: `lambda`, `alpha`, `evidence`. Each row holds
/// the motivated posterior's `q(0)`, the Bayes reference `q(0)`, and the
/// objective breakdown at the optimum. `lambda = 0` entries route to the
/// zero-tempering limit solver.
pub fn evidence_strength_sweep(
    prior: &Categorical,
    utility: &LinearAffectiveUtility,
    lambda_values: &[f64],
    alpha_values: &[f64],
    evidence: &[BernoulliEvidence],
) -> Result<SweepResult> {
    require_two_state(prior)?;
    require_nonempty("lambda", lambda_values)?;
    require_nonempty("alpha", alpha_values)?;
    if evidence.is_empty() {
        return Err(Error::EmptyGrid { name: "evidence" });
    }
    let axes = vec![
        Axis::linear("lambda", lambda_values.to_vec()),
        Axis::linear("alpha", alpha_values.to_vec()),
        Axis::linear(
            "evidence",
            evidence.iter().map(|e| e.strength()).collect(),
        ),
    ];
    run_sweep(SweepKind::EvidenceStrength, axes, &POSTERIOR_COLUMNS, |coords| {
        let (lambda, alpha, e) = (coords[0], coords[1], coords[2]);
        let lik = Likelihood::new(vec![e, 1.0 - e])?;
        let update = linear_update(prior, &lik, utility, alpha, lambda)?;
        let bayes = bayes_update(prior, &lik)?;
        Ok(posterior_row(&update, &bayes))
    })
}

/// The default evidence axis used by the response-curve presets:
/// 101 strengths evenly spaced over `[0.01, 0.99]`.
pub fn default_evidence_axis() -> Vec<BernoulliEvidence> {
    BernoulliEvidence::default_grid(101)
}

// ---------------------------------------------------------------------------
// Evidence selection
// ---------------------------------------------------------------------------

/// One evaluated menu entry inside a [`SelectionOutcome`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptionOutcome {
    pub label: String,
    pub result: UpdateResult,
    /// Objective total at the optimal posterior for this option; the value
    /// being maximized across the menu.
    pub total: f64,
}

/// The result of letting an agent pick which evidence to observe.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionOutcome {
    /// Index into `per_option` of the chosen entry: the argmax of the
    /// totals, ties broken toward the lowest index. Minus-infinity totals
    /// (evidence forcing an impossible belief) rank below everything.
    pub chosen_index: usize,
    pub per_option: Vec<OptionOutcome>,
}

impl SelectionOutcome {
    pub fn chosen(&self) -> &OptionOutcome {
        &self.per_option[self.chosen_index]
    }
}

/// Evaluates every option on the menu — solving for the optimal posterior
/// the agent *would* hold after seeing it — and picks the one whose
/// objective total is highest.
pub fn select_evidence(
    prior: &Categorical,
    utility: &LinearAffectiveUtility,
    alpha: f64,
    lambda: f64,
    menu: &[EvidenceOption],
) -> Result<SelectionOutcome> {
    if menu.is_empty() {
        return Err(Error::EmptyMenu);
    }
    let mut per_option = Vec::with_capacity(menu.len());
    for option in menu {
        let result = linear_update(prior, &option.lik, utility, alpha, lambda)?;
        per_option.push(OptionOutcome {
            label: option.label.clone(),
            total: result.breakdown.total,
            result,
        });
    }
    let mut chosen_index = 0;
    for (i, option) in per_option.iter().enumerate().skip(1) {
        if option.total > per_option[chosen_index].total {
            chosen_index = i;
        }
    }
    Ok(SelectionOutcome {
        chosen_index,
        per_option,
    })
}

fn require_pair(menu: &[EvidenceOption]) -> Result<()> {
    if menu.len() != 2 {
        return Err(Error::MenuSize {
            expected: 2,
            got: menu.len(),
        });
    }
    Ok(())
}

/// Number of scan points used to bracket a selection threshold before
/// bisection takes over.
const THRESHOLD_SCAN_POINTS: usize = 257;

/// Absolute λ tolerance to which a bracketed threshold is bisected.
pub const THRESHOLD_TOLERANCE: f64 = 1e-6;

/// Finds the tempering weight λ* at which a two-option agent switches
/// preference, if it switches at all.
///
/// The objective-total difference (first option minus second) is scanned
/// over a log-spaced grid across `lambda_range`; the first strict sign
/// change is narrowed by bisection to an absolute tolerance of
/// [`THRESHOLD_TOLERANCE`]. Returns `None` when the difference never
/// changes sign — including the degenerate identical-options case, where
/// it is zero everywhere.
pub fn selection_threshold(
    prior: &Categorical,
    utility: &LinearAffectiveUtility,
    alpha: f64,
    menu: &[EvidenceOption],
    lambda_range: (f64, f64),
) -> Result<Option<f64>> {
    require_pair(menu)?;
    let (lo, hi) = lambda_range;
    if !(lo.is_finite() && lo > 0.0) {
        return Err(Error::LambdaNonPositive(lo));
    }
    if !(hi.is_finite() && hi > lo) {
        return Err(Error::InvalidParameter {
            name: "lambda_range",
            value: hi,
            message: "upper bound must be finite and exceed the lower bound",
        });
    }

    let difference = |lambda: f64| -> Result<f64> {
        let a = linear_update(prior, &menu[0].lik, utility, alpha, lambda)?;
        let b = linear_update(prior, &menu[1].lik, utility, alpha, lambda)?;
        Ok(a.breakdown.total - b.breakdown.total)
    };

    // Scan for a bracket: the first pair of nonzero differences with
    // opposite signs. Exact zeros are folded into the bracket rather than
    // treated as crossings, so an identically-zero difference yields None.
    let scan = logspace(lo, hi, THRESHOLD_SCAN_POINTS);
    let mut previous: Option<(f64, f64)> = None;
    let mut bracket = None;
    for &x in &scan {
        let d = difference(x)?;
        if d == 0.0 {
            continue;
        }
        if let Some((px, pd)) = previous {
            if (pd > 0.0) != (d > 0.0) {
                bracket = Some((px, pd, x));
                break;
            }
        }
        previous = Some((x, d));
    }
    let Some((mut lo_x, lo_d, mut hi_x)) = bracket else {
        return Ok(None);
    };

    while hi_x - lo_x > THRESHOLD_TOLERANCE {
        let mid = 0.5 * (lo_x + hi_x);
        let d = difference(mid)?;
        if d == 0.0 {
            return Ok(Some(mid));
        }
        if (d > 0.0) == (lo_d > 0.0) {
            lo_x = mid;
        } else {
            hi_x = mid;
        }
    }
    Ok(Some(0.5 * (lo_x + hi_x)))
}

/// Column names for the two-option selection sweeps.
const SELECTION_COLUMNS: [&str; 5] =
    ["total_a", "total_b", "difference", "chosen", "posterior_q0"];

fn selection_row(
    prior: &Categorical,
    utility: &LinearAffectiveUtility,
    alpha: f64,
    lambda: f64,
    menu: &[EvidenceOption],
) -> Result<Vec<f64>> {
    let a = linear_update(prior, &menu[0].lik, utility, alpha, lambda)?;
    let b = linear_update(prior, &menu[1].lik, utility, alpha, lambda)?;
    let (ta, tb) = (a.breakdown.total, b.breakdown.total);
    let chosen = if ta >= tb { 0.0 } else { 1.0 };
    let q0 = if chosen == 0.0 {
        a.posterior.prob(0)
    } else {
        b.posterior.prob(0)
    };
    Ok(vec![ta, tb, ta - tb, chosen, q0])
}

/// Objective totals for a two-option menu across a λ grid — the curves
/// whose crossing [`selection_threshold`] pinpoints.
///
/// Single axis `lambda`; columns `total_a`, `total_b`, `difference`,
/// `chosen` (0 or 1), and the chosen option's posterior `q(0)`.
pub fn selection_objective_sweep(
    prior: &Categorical,
    utility: &LinearAffectiveUtility,
    alpha: f64,
    menu: &[EvidenceOption],
    lambda_values: &[f64],
) -> Result<SweepResult> {
    require_pair(menu)?;
    require_nonempty("lambda", lambda_values)?;
    let axes = vec![Axis::linear("lambda", lambda_values.to_vec())];
    run_sweep(SweepKind::SelectionCurve, axes, &SELECTION_COLUMNS, |coords| {
        selection_row(prior, utility, alpha, coords[0], menu)
    })
}

/// Two-option preference over a full (λ, α) grid — the data behind a
/// decision-boundary heatmap.
///
/// Axes in row-major order: `lambda`, `alpha`; columns as in
/// [`selection_objective_sweep`]. The `chosen` column changes exactly where
/// the `difference` column changes sign.
pub fn selection_boundary_heatmap(
    prior: &Categorical,
    utility: &LinearAffectiveUtility,
    menu: &[EvidenceOption],
    lambda_values: &[f64],
    alpha_values: &[f64],
) -> Result<SweepResult> {
    require_pair(menu)?;
    require_nonempty("lambda", lambda_values)?;
    require_nonempty("alpha", alpha_values)?;
    let axes = vec![
        Axis::linear("lambda", lambda_values.to_vec()),
        Axis::linear("alpha", alpha_values.to_vec()),
    ];
    run_sweep(
        SweepKind::SelectionBoundary,
        axes,
        &SELECTION_COLUMNS,
        |coords| selection_row(prior, utility, coords[1], coords[0], menu),
    )
}

// ---------------------------------------------------------------------------
// Objective landscapes
// ---------------------------------------------------------------------------

/// Optimal objective value and posterior across a (λ, α) grid for one fixed
/// piece of evidence.
///
/// Axes in row-major order: `lambda`, `alpha`; columns as in
/// [`evidence_strength_sweep`].
pub fn objective_landscape_heatmap(
    prior: &Categorical,
    utility: &LinearAffectiveUtility,
    evidence: BernoulliEvidence,
    lambda_values: &[f64],
    alpha_values: &[f64],
) -> Result<SweepResult> {
    require_two_state(prior)?;
    require_nonempty("lambda", lambda_values)?;
    require_nonempty("alpha", alpha_values)?;
    let lik = evidence.likelihood();
    let bayes = bayes_update(prior, &lik)?;
    let axes = vec![
        Axis::linear("lambda", lambda_values.to_vec()),
        Axis::linear("alpha", alpha_values.to_vec()),
    ];
    run_sweep(
        SweepKind::ObjectiveLandscape,
        axes,
        &POSTERIOR_COLUMNS,
        |coords| {
            let update = linear_update(prior, &lik, utility, coords[1], coords[0])?;
            Ok(posterior_row(&update, &bayes))
        },
    )
}

// ---------------------------------------------------------------------------
// Polarization
// ---------------------------------------------------------------------------

/// Column names for the polarization sweeps.
const POLARIZATION_COLUMNS: [&str; 4] = ["agent1_q0", "agent2_q0", "bayes_q0", "gap"];

/// Two-agent polarization with the canonical opposed preferences: agent 1
/// wants to believe state 0 (`c = (1, 0)`), agent 2 wants to believe
/// state 1 (`c = (0, 1)`). Both share `prior` and observe `evidence`.
///
/// Axes in row-major order: `lambda`, `alpha` (zeros allowed on both —
/// `lambda = 0` routes to the limit solver). Columns: each agent's
/// posterior `q(0)`, the shared Bayes reference `q(0)`, and the gap
/// `|q1(0) - q2(0)|`.
pub fn polarization_sweep(
    prior: &Categorical,
    evidence: &Likelihood,
    lambda_values: &[f64],
    alpha_values: &[f64],
) -> Result<SweepResult> {
    require_two_state(prior)?;
    let utility1 = LinearAffectiveUtility::new(vec![1.0, 0.0])?;
    let utility2 = LinearAffectiveUtility::new(vec![0.0, 1.0])?;
    polarization_sweep_with_utilities(
        prior,
        evidence,
        &utility1,
        &utility2,
        lambda_values,
        alpha_values,
    )
}

/// [`polarization_sweep`] with caller-supplied utilities for each agent
/// (e.g. identical utilities, for which the gap is zero everywhere).
pub fn polarization_sweep_with_utilities(
    prior: &Categorical,
    evidence: &Likelihood,
    utility1: &LinearAffectiveUtility,
    utility2: &LinearAffectiveUtility,
    lambda_values: &[f64],
    alpha_values: &[f64],
) -> Result<SweepResult> {
    require_nonempty("lambda", lambda_values)?;
    require_nonempty("alpha", alpha_values)?;
    let bayes = bayes_update(prior, evidence)?;
    let axes = vec![
        Axis::linear("lambda", lambda_values.to_vec()),
        Axis::linear("alpha", alpha_values.to_vec()),
    ];
    run_sweep(
        SweepKind::Polarization,
        axes,
        &POLARIZATION_COLUMNS,
        |coords| {
            let (lambda, alpha) = (coords[0], coords[1]);
            let r1 = linear_update(prior, evidence, utility1, alpha, lambda)?;
            let r2 = linear_update(prior, evidence, utility2, alpha, lambda)?;
            let q1 = r1.posterior.prob(0);
            let q2 = r2.posterior.prob(0);
            Ok(vec![q1, q2, bayes.prob(0), (q1 - q2).abs()])
        },
    )
}

/// Default shared prior for the polarization preset: maximal uncertainty,
/// so any divergence between the agents is driven purely by their
/// preferences.
pub fn default_polarization_prior() -> Categorical {
    Categorical::new(vec![0.5, 0.5]).expect("hard-coded prior is valid")
}

/// Default shared evidence for the polarization preset: mildly informative
/// toward state 0, so the accuracy weight α has something to bite on.
pub fn default_polarization_evidence() -> Likelihood {
    Likelihood::new(vec![0.6, 0.4]).expect("hard-coded likelihood is valid")
}

// ---------------------------------------------------------------------------
// Built-in selection scenarios
// ---------------------------------------------------------------------------

/// A ready-to-run two-option selection problem: prior, preferences, accuracy
/// weight, and a two-entry menu.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionScenario {
    pub prior: Categorical,
    pub utility: LinearAffectiveUtility,
    pub alpha: f64,
    pub menu: Vec<EvidenceOption>,
}

impl SelectionScenario {
    /// Runs [`select_evidence`] at one tempering weight.
    pub fn select(&self, lambda: f64) -> Result<SelectionOutcome> {
        select_evidence(&self.prior, &self.utility, self.alpha, lambda, &self.menu)
    }

    /// Runs [`selection_threshold`] over the given λ range.
    pub fn threshold(&self, lambda_range: (f64, f64)) -> Result<Option<f64>> {
        selection_threshold(&self.prior, &self.utility, self.alpha, &self.menu, lambda_range)
    }

    /// Runs [`selection_objective_sweep`] over a λ grid.
    pub fn objective_sweep(&self, lambda_values: &[f64]) -> Result<SweepResult> {
        selection_objective_sweep(&self.prior, &self.utility, self.alpha, &self.menu, lambda_values)
    }

    /// Runs [`selection_boundary_heatmap`] over a (λ, α) grid. The
    /// scenario's own `alpha` is ignored in favor of the grid.
    pub fn boundary_heatmap(
        &self,
        lambda_values: &[f64],
        alpha_values: &[f64],
    ) -> Result<SweepResult> {
        selection_boundary_heatmap(&self.prior, &self.utility, &self.menu, lambda_values, alpha_values)
    }
}

/// Default λ range over which selection thresholds are hunted.
pub const DEFAULT_THRESHOLD_RANGE: (f64, f64) = (0.1, 100.0);

/// Built-in scenario where confirmation is *expensive*: the agent prefers
/// state 0 but holds a skeptical prior, option "A" confirms strongly
/// (large belief shift, high divergence cost), and option "B" mildly
/// contradicts (small shift, cheap). The preferred option flips from A to
/// B as λ makes belief change costly — this scenario has a threshold.
///
/// Construction checks the structure it promises: Bayes on A must raise
/// `q(0)`, Bayes on B must lower it, and A's Bayes posterior must be
/// farther (in divergence) from the prior than B's.
pub fn costly_confirmation_scenario() -> SelectionScenario {
    build_scenario(
        vec![0.3, 0.7],
        vec![0.95, 0.05],
        vec![0.4, 0.6],
        CostOrdering::ConfirmationCostsMore,
    )
}

/// Built-in scenario where confirmation is *cheap*: the agent already leans
/// toward its preferred state 0, option "A" confirms gently (small shift),
/// and option "B" contradicts hard (large shift). Confirming is better on
/// both the utility and divergence axes at once, so no λ makes the agent
/// switch — there is no threshold.
pub fn cheap_confirmation_scenario() -> SelectionScenario {
    build_scenario(
        vec![0.7, 0.3],
        vec![0.8, 0.2],
        vec![0.2, 0.8],
        CostOrdering::ConfirmationCostsLess,
    )
}

enum CostOrdering {
    ConfirmationCostsMore,
    ConfirmationCostsLess,
}

fn build_scenario(
    prior: Vec<f64>,
    lik_a: Vec<f64>,
    lik_b: Vec<f64>,
    ordering: CostOrdering,
) -> SelectionScenario {
    let prior = Categorical::new(prior).expect("hard-coded prior is valid");
    let utility = LinearAffectiveUtility::new(vec![1.0, 0.0]).expect("hard-coded utility is valid");
    let a = Likelihood::new(lik_a).expect("hard-coded likelihood is valid");
    let b = Likelihood::new(lik_b).expect("hard-coded likelihood is valid");

    // Structural self-check: these are compile-time constants, so a failure
    // here means the constants were edited into something that no longer
    // tells the story the docs promise.
    let bayes_a = bayes_update(&prior, &a).expect("valid update");
    let bayes_b = bayes_update(&prior, &b).expect("valid update");
    assert!(
        bayes_a.prob(0) > prior.prob(0),
        "option A must confirm the preferred state"
    );
    assert!(
        bayes_b.prob(0) < prior.prob(0),
        "option B must contradict the preferred state"
    );
    let kl_a = crate::belief::kl_divergence(&bayes_a, &prior).expect("shared support");
    let kl_b = crate::belief::kl_divergence(&bayes_b, &prior).expect("shared support");
    match ordering {
        CostOrdering::ConfirmationCostsMore => assert!(
            kl_a > kl_b,
            "confirming must move belief farther than contradicting"
        ),
        CostOrdering::ConfirmationCostsLess => assert!(
            kl_a < kl_b,
            "confirming must move belief less than contradicting"
        ),
    }

    SelectionScenario {
        prior,
        utility,
        alpha: 2.0,
        menu: vec![EvidenceOption::new("A", a), EvidenceOption::new("B", b)],
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::kl_divergence;

    fn cat(probs: &[f64]) -> Categorical {
        Categorical::new(probs.to_vec()).unwrap()
    }

    fn lik(values: &[f64]) -> Likelihood {
        Likelihood::new(values.to_vec()).unwrap()
    }

    fn linear_utility(coeffs: &[f64]) -> LinearAffectiveUtility {
        LinearAffectiveUtility::new(coeffs.to_vec()).unwrap()
    }

    // -- evidence -------------------------------------------------------------

    #[test]
    fn evidence_clamps_to_default_bounds() {
        assert_eq!(BernoulliEvidence::new(0.001).unwrap().strength(), 0.01);
        assert_eq!(BernoulliEvidence::new(0.9999).unwrap().strength(), 0.99);
        assert_eq!(BernoulliEvidence::new(0.5).unwrap().strength(), 0.5);
    }

    #[test]
    fn evidence_custom_bounds() {
        let e = BernoulliEvidence::with_bounds(0.0, 0.0, 1.0).unwrap();
        assert_eq!(e.strength(), 0.0);
        assert!(BernoulliEvidence::with_bounds(0.5, 0.6, 0.4).is_err());
        assert!(BernoulliEvidence::new(f64::NAN).is_err());
    }

    #[test]
    fn evidence_likelihood_is_complementary() {
        let l = BernoulliEvidence::new(0.7).unwrap().likelihood();
        assert_eq!(l.values(), &[0.7, 1.0 - 0.7]);
    }

    #[test]
    fn default_evidence_grid_shape() {
        let g = BernoulliEvidence::default_grid(101);
        assert_eq!(g.len(), 101);
        assert_eq!(g[0].strength(), 0.01);
        assert_eq!(g[100].strength(), 0.99);
    }

    // -- sweep mechanics --------------------------------------------------------

    #[test]
    fn sweep_rows_are_row_major_with_last_axis_fastest() {
        let prior = cat(&[0.5, 0.5]);
        let u = linear_utility(&[0.0, 0.0]);
        let evidence: Vec<BernoulliEvidence> = [0.2, 0.5, 0.8]
            .iter()
            .map(|&e| BernoulliEvidence::new(e).unwrap())
            .collect();
        let sweep =
            evidence_strength_sweep(&prior, &u, &[1.0, 2.0], &[1.0], &evidence).unwrap();
        assert_eq!(sweep.n_cells(), 6);
        assert_eq!(sweep.rows.len(), 6);
        // Row 0..2 hold lambda=1 with evidence 0.2, 0.5, 0.8; rows 3..5 lambda=2.
        assert_eq!(sweep.coords(0), vec![1.0, 1.0, 0.2]);
        assert_eq!(sweep.coords(1), vec![1.0, 1.0, 0.5]);
        assert_eq!(sweep.coords(3), vec![2.0, 1.0, 0.2]);
        // With c = 0 the posterior is the tempered Bayes rule q ∝ p·lik^(α/λ),
        // so the rows with λ = 1 (and α = 1) equal their Bayes reference.
        let q = sweep.column_index("posterior_q0").unwrap();
        let b = sweep.column_index("bayes_q0").unwrap();
        for (i, row) in sweep.rows.iter().enumerate() {
            if sweep.coords(i)[0] == 1.0 {
                assert!((row[q] - row[b]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sweeps_are_deterministic_across_runs() {
        let prior = cat(&[0.3, 0.7]);
        let u = linear_utility(&[1.0, 0.0]);
        let evidence = BernoulliEvidence::default_grid(25);
        let run = || {
            evidence_strength_sweep(&prior, &u, &linspace(0.5, 10.0, 8), &[1.0, 5.0], &evidence)
                .unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn empty_grids_are_rejected() {
        let prior = cat(&[0.5, 0.5]);
        let u = linear_utility(&[0.0, 0.0]);
        let err =
            evidence_strength_sweep(&prior, &u, &[], &[1.0], &BernoulliEvidence::default_grid(3))
                .unwrap_err();
        assert!(matches!(err, Error::EmptyGrid { name: "lambda" }));
    }

    #[test]
    fn uninformative_uniform_cell_recovers_one_half() {
        // lik (0.7, 0.3) on prior (0.3, 0.7) with c = 0 and unit weights:
        // joint weights are equal, so both the posterior and Bayes give 0.5.
        let prior = cat(&[0.3, 0.7]);
        let u = linear_utility(&[0.0, 0.0]);
        let evidence = vec![BernoulliEvidence::new(0.7).unwrap()];
        let sweep = evidence_strength_sweep(&prior, &u, &[1.0], &[1.0], &evidence).unwrap();
        let row = &sweep.rows[0];
        assert!((row[0] - 0.5).abs() < 1e-12);
        assert!((row[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn stronger_tempering_stays_closer_to_the_prior() {
        // Fixed evidence 0.7, alpha 1: lambda 10 ends nearer 0.3 than lambda 1.
        let prior = cat(&[0.3, 0.7]);
        let u = linear_utility(&[1.0, 0.0]);
        let evidence = vec![BernoulliEvidence::new(0.7).unwrap()];
        let sweep = evidence_strength_sweep(&prior, &u, &[1.0, 10.0], &[1.0], &evidence).unwrap();
        let d1 = (sweep.rows[0][0] - 0.3).abs();
        let d10 = (sweep.rows[1][0] - 0.3).abs();
        assert!(d10 < d1, "d10={d10} should be < d1={d1}");
    }

    #[test]
    fn stronger_accuracy_weight_tracks_bayes_on_contradicting_evidence() {
        // Fixed evidence 0.3, lambda 1: alpha 10 lands nearer the Bayes
        // posterior 0.09/0.58 than alpha 1 does.
        let prior = cat(&[0.3, 0.7]);
        let u = linear_utility(&[1.0, 0.0]);
        let evidence = vec![BernoulliEvidence::new(0.3).unwrap()];
        let sweep = evidence_strength_sweep(&prior, &u, &[1.0], &[1.0, 10.0], &evidence).unwrap();
        let bayes = 0.09 / 0.58;
        assert!((sweep.rows[0][1] - bayes).abs() < 1e-12);
        let d1 = (sweep.rows[0][0] - bayes).abs();
        let d10 = (sweep.rows[1][0] - bayes).abs();
        assert!(d10 < d1, "d10={d10} should be < d1={d1}");
    }

    #[test]
    fn preference_for_a_state_biases_its_posterior_upward() {
        let prior = cat(&[0.3, 0.7]);
        let preferring = linear_utility(&[1.0, 0.0]);
        let neutral = linear_utility(&[0.0, 0.0]);
        let evidence = BernoulliEvidence::default_grid(11);
        let lambdas = [0.5, 1.0, 4.0];
        let alphas = [0.0, 1.0, 3.0];
        let biased =
            evidence_strength_sweep(&prior, &preferring, &lambdas, &alphas, &evidence).unwrap();
        let plain = evidence_strength_sweep(&prior, &neutral, &lambdas, &alphas, &evidence).unwrap();
        for (b, p) in biased.rows.iter().zip(plain.rows.iter()) {
            assert!(b[0] > p[0]);
        }
    }

    // -- selection ---------------------------------------------------------------

    #[test]
    fn single_option_menus_choose_it() {
        let prior = cat(&[0.5, 0.5]);
        let u = linear_utility(&[1.0, 0.0]);
        let menu = vec![EvidenceOption::new("only", lik(&[0.7, 0.3]))];
        let outcome = select_evidence(&prior, &u, 1.0, 1.0, &menu).unwrap();
        assert_eq!(outcome.chosen_index, 0);
        assert_eq!(outcome.chosen().label, "only");
    }

    #[test]
    fn identical_options_tie_toward_the_first() {
        let prior = cat(&[0.5, 0.5]);
        let u = linear_utility(&[1.0, 0.0]);
        let menu = vec![
            EvidenceOption::new("first", lik(&[0.7, 0.3])),
            EvidenceOption::new("second", lik(&[0.7, 0.3])),
        ];
        let outcome = select_evidence(&prior, &u, 1.0, 1.0, &menu).unwrap();
        assert_eq!(outcome.chosen_index, 0);
    }

    #[test]
    fn empty_menu_is_an_error() {
        let prior = cat(&[0.5, 0.5]);
        let u = linear_utility(&[1.0, 0.0]);
        assert!(matches!(
            select_evidence(&prior, &u, 1.0, 1.0, &[]).unwrap_err(),
            Error::EmptyMenu
        ));
    }

    #[test]
    fn costly_confirmation_flips_from_confirm_to_contradict() {
        let scenario = costly_confirmation_scenario();
        // Cheap belief change: confirm (option A, index 0).
        assert_eq!(scenario.select(0.1).unwrap().chosen_index, 0);
        // Expensive belief change: take the near-prior option B instead.
        assert_eq!(scenario.select(100.0).unwrap().chosen_index, 1);
    }

    #[test]
    fn costly_confirmation_has_exactly_one_threshold() {
        let scenario = costly_confirmation_scenario();
        let lambda = scenario.threshold(DEFAULT_THRESHOLD_RANGE).unwrap();
        let lambda = lambda.expect("a switch must exist in range");
        assert!(lambda > 0.1 && lambda < 100.0);
        // The choice genuinely differs on either side of the threshold.
        let eps = 10.0 * THRESHOLD_TOLERANCE;
        let below = scenario.select(lambda - eps).unwrap().chosen_index;
        let above = scenario.select(lambda + eps).unwrap().chosen_index;
        assert_ne!(below, above);
        // Coarse bracket for the golden value pinned in the acceptance suite.
        assert!(lambda > 1.0 && lambda < 2.5, "lambda* = {lambda}");
    }

    #[test]
    fn cheap_confirmation_never_switches() {
        let scenario = cheap_confirmation_scenario();
        assert_eq!(scenario.threshold(DEFAULT_THRESHOLD_RANGE).unwrap(), None);
        assert_eq!(scenario.select(0.1).unwrap().chosen_index, 0);
        assert_eq!(scenario.select(100.0).unwrap().chosen_index, 0);
    }

    #[test]
    fn identical_option_menus_have_no_threshold() {
        let prior = cat(&[0.3, 0.7]);
        let u = linear_utility(&[1.0, 0.0]);
        let menu = vec![
            EvidenceOption::new("x", lik(&[0.6, 0.4])),
            EvidenceOption::new("y", lik(&[0.6, 0.4])),
        ];
        assert_eq!(
            selection_threshold(&prior, &u, 1.0, &menu, DEFAULT_THRESHOLD_RANGE).unwrap(),
            None
        );
    }

    #[test]
    fn threshold_validates_its_range_and_menu() {
        let scenario = costly_confirmation_scenario();
        assert!(matches!(
            scenario.threshold((0.0, 10.0)).unwrap_err(),
            Error::LambdaNonPositive(_)
        ));
        assert!(matches!(
            scenario.threshold((5.0, 5.0)).unwrap_err(),
            Error::InvalidParameter { .. }
        ));
        let prior = cat(&[0.5, 0.5]);
        let u = linear_utility(&[1.0, 0.0]);
        let menu = vec![EvidenceOption::new("only", lik(&[0.7, 0.3]))];
        assert!(matches!(
            selection_threshold(&prior, &u, 1.0, &menu, DEFAULT_THRESHOLD_RANGE).unwrap_err(),
            Error::MenuSize {
                expected: 2,
                got: 1
            }
        ));
    }

    #[test]
    fn scenario_constants_tell_the_promised_story() {
        // Frozen divergence profile of the built-in scenarios, so edits to
        // the constants cannot silently change what they demonstrate.
        let costly = costly_confirmation_scenario();
        let bayes_a = bayes_update(&costly.prior, &costly.menu[0].lik).unwrap();
        let bayes_b = bayes_update(&costly.prior, &costly.menu[1].lik).unwrap();
        let kl_a = kl_divergence(&bayes_a, &costly.prior).unwrap();
        let kl_b = kl_divergence(&bayes_b, &costly.prior).unwrap();
        assert!((kl_a - 0.7661).abs() < 1e-3, "kl_a = {kl_a}");
        assert!((kl_b - 0.0153).abs() < 1e-3, "kl_b = {kl_b}");

        let cheap = cheap_confirmation_scenario();
        let bayes_a = bayes_update(&cheap.prior, &cheap.menu[0].lik).unwrap();
        let bayes_b = bayes_update(&cheap.prior, &cheap.menu[1].lik).unwrap();
        let kl_a = kl_divergence(&bayes_a, &cheap.prior).unwrap();
        let kl_b = kl_divergence(&bayes_b, &cheap.prior).unwrap();
        assert!((kl_a - 0.1207).abs() < 1e-3, "kl_a = {kl_a}");
        assert!((kl_b - 0.2337).abs() < 1e-3, "kl_b = {kl_b}");
        assert!(kl_a < kl_b);
    }

    #[test]
    fn selection_sweep_difference_sign_matches_choice() {
        let scenario = costly_confirmation_scenario();
        let sweep = scenario.objective_sweep(&logspace(0.1, 100.0, 41)).unwrap();
        let d = sweep.column_index("difference").unwrap();
        let c = sweep.column_index("chosen").unwrap();
        let mut switches = 0;
        let mut last_choice = None;
        for row in &sweep.rows {
            let expected = if row[d] >= 0.0 { 0.0 } else { 1.0 };
            assert_eq!(row[c], expected);
            if let Some(prev) = last_choice {
                if prev != row[c] {
                    switches += 1;
                }
            }
            last_choice = Some(row[c]);
        }
        assert_eq!(switches, 1);
    }

    // -- landscape ----------------------------------------------------------------

    #[test]
    fn landscape_totals_dominate_the_prior_objective() {
        use crate::objective::{objective_value, AgentParams};
        let prior = cat(&[0.3, 0.7]);
        let u = linear_utility(&[1.0, 0.0]);
        let evidence = BernoulliEvidence::new(0.3).unwrap();
        let lambdas = linspace(0.5, 10.0, 12);
        let alphas = linspace(0.5, 10.0, 12);
        let sweep =
            objective_landscape_heatmap(&prior, &u, evidence, &lambdas, &alphas).unwrap();
        let t = sweep.column_index("total").unwrap();
        for (i, row) in sweep.rows.iter().enumerate() {
            let coords = sweep.coords(i);
            let params = AgentParams::new(coords[0], coords[1], &u).unwrap();
            let at_prior = objective_value(&prior, &prior, &evidence.likelihood(), &params)
                .unwrap()
                .total;
            assert!(row[t] >= at_prior - 1e-12);
        }
    }

    #[test]
    fn landscape_neutral_unit_cell_is_bayes() {
        let prior = cat(&[0.3, 0.7]);
        let u = linear_utility(&[0.0, 0.0]);
        let evidence = BernoulliEvidence::new(0.7).unwrap();
        let sweep = objective_landscape_heatmap(&prior, &u, evidence, &[1.0], &[1.0]).unwrap();
        assert!((sweep.rows[0][0] - sweep.rows[0][1]).abs() < 1e-12);
    }

    #[test]
    fn landscape_rows_move_toward_the_prior_as_lambda_grows() {
        let prior = cat(&[0.3, 0.7]);
        let u = linear_utility(&[1.0, 0.0]);
        let evidence = BernoulliEvidence::new(0.7).unwrap();
        let lambdas = linspace(1.0, 10.0, 10);
        let alphas = linspace(1.0, 10.0, 4);
        let sweep =
            objective_landscape_heatmap(&prior, &u, evidence, &lambdas, &alphas).unwrap();
        let n_alpha = alphas.len();
        for (a_idx, _) in alphas.iter().enumerate() {
            let mut last = f64::INFINITY;
            for (l_idx, _) in lambdas.iter().enumerate() {
                let row = &sweep.rows[l_idx * n_alpha + a_idx];
                let distance = (row[0] - prior.prob(0)).abs();
                assert!(distance <= last + 1e-12);
                last = distance;
            }
        }
    }

    // -- polarization ----------------------------------------------------------------

    #[test]
    fn polarization_matches_the_symmetric_hand_values() {
        // Uninformative evidence on a symmetric prior: the gap has the
        // closed form tanh(1 / (2 lambda)).
        let prior = cat(&[0.5, 0.5]);
        let evidence = lik(&[0.5, 0.5]);
        let sweep = polarization_sweep(&prior, &evidence, &[0.1, 10.0], &[1.0]).unwrap();
        let g = sweep.column_index("gap").unwrap();
        assert!((sweep.rows[0][g] - 0.99991).abs() < 1e-3);
        assert!((sweep.rows[0][g] - (5.0f64).tanh()).abs() < 1e-12);
        assert!((sweep.rows[1][g] - 0.0500).abs() < 1e-3);
        assert!((sweep.rows[1][g] - (0.05f64).tanh()).abs() < 1e-12);
    }

    #[test]
    fn polarization_is_symmetric_for_symmetric_inputs() {
        let prior = cat(&[0.5, 0.5]);
        let evidence = lik(&[0.5, 0.5]);
        let sweep =
            polarization_sweep(&prior, &evidence, &linspace(0.0, 10.0, 21), &[1.0]).unwrap();
        for row in &sweep.rows {
            assert!((row[0] + row[1] - 1.0).abs() < 1e-12);
            assert!((row[3] - (2.0 * row[0] - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn polarization_gap_shrinks_along_both_axes() {
        let prior = default_polarization_prior();
        let evidence = default_polarization_evidence();
        // Across lambda at alpha = 1.
        let sweep =
            polarization_sweep(&prior, &evidence, &linspace(0.0, 10.0, 51), &[1.0]).unwrap();
        let g = sweep.column_index("gap").unwrap();
        let gaps: Vec<f64> = sweep.rows.iter().map(|r| r[g]).collect();
        assert!(gaps.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(*gaps.last().unwrap() < gaps[1]);
        // Across alpha at lambda = 1 (informative evidence required).
        let sweep =
            polarization_sweep(&prior, &evidence, &[1.0], &linspace(0.0, 10.0, 51)).unwrap();
        let gaps: Vec<f64> = sweep.rows.iter().map(|r| r[g]).collect();
        assert!(gaps.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(*gaps.last().unwrap() < gaps[1]);
    }

    #[test]
    fn polarization_zero_lambda_pins_each_agent_to_its_preference() {
        let prior = default_polarization_prior();
        let evidence = default_polarization_evidence();
        let sweep = polarization_sweep(&prior, &evidence, &[0.0], &[1.0]).unwrap();
        let row = &sweep.rows[0];
        assert_eq!(row[0], 1.0);
        assert_eq!(row[1], 0.0);
        assert_eq!(row[3], 1.0);
    }

    #[test]
    fn identical_utilities_never_polarize() {
        let prior = default_polarization_prior();
        let evidence = default_polarization_evidence();
        let u = linear_utility(&[1.0, 0.0]);
        let sweep = polarization_sweep_with_utilities(
            &prior,
            &evidence,
            &u,
            &u,
            &linspace(0.5, 10.0, 7),
            &linspace(0.0, 10.0, 7),
        )
        .unwrap();
        let g = sweep.column_index("gap").unwrap();
        for row in &sweep.rows {
            assert_eq!(row[g], 0.0);
        }
    }

    #[test]
    fn polarization_bayes_reference_ignores_preferences() {
        let prior = cat(&[0.5, 0.5]);
        let evidence = lik(&[0.6, 0.4]);
        let sweep = polarization_sweep(&prior, &evidence, &[1.0], &[1.0]).unwrap();
        assert!((sweep.rows[0][2] - 0.6).abs() < 1e-12);
    }
}
