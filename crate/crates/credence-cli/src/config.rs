//! Run configuration: TOML schema, flag-value grammar, per-scenario
//! validation, and the resolved echo that rides along in every output.
//!
//! A configuration can arrive from a `--config file.toml`, from command-line
//! flags, or both (flags win key-by-key). After defaults are applied the
//! result is a [`RunConfig`] whose every parameter — including defaulted
//! ones — is echoed into output metadata as valid TOML, so a result file
//! alone carries enough to re-run its experiment.

use std::fmt::Write as _;
use std::path::Path;

use credence::experiments::{linspace, logspace};
use credence::{Categorical, EvidenceOption, Likelihood, NumericSolverConfig};

use crate::CliError;

/// Which experiment a run performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// One posterior from one prior/likelihood/payoff triple.
    Update,
    /// Posterior response over λ/α/evidence-strength grids.
    Sweep,
    /// Pick the best evidence source from a menu at one (α, λ).
    Select,
    /// Hunt the λ where the menu choice flips.
    Threshold,
    /// Per-cell objective landscape or decision boundary over a (λ, α) grid.
    Heatmap,
    /// Two opposed agents reading the same evidence.
    Polarize,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Update => "update",
            Scenario::Sweep => "sweep",
            Scenario::Select => "select",
            Scenario::Threshold => "threshold",
            Scenario::Heatmap => "heatmap",
            Scenario::Polarize => "polarize",
        }
    }

    fn parse(text: &str) -> Result<Self, CliError> {
        match text {
            "update" => Ok(Scenario::Update),
            "sweep" => Ok(Scenario::Sweep),
            "select" => Ok(Scenario::Select),
            "threshold" => Ok(Scenario::Threshold),
            "heatmap" => Ok(Scenario::Heatmap),
            "polarize" => Ok(Scenario::Polarize),
            other => Err(CliError::validation(
                "scenario",
                format!("unknown scenario `{other}`"),
            )),
        }
    }
}

/// Output serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        match text {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::validation(
                "format",
                format!("unknown format `{other}` (expected csv or json)"),
            )),
        }
    }
}

/// Which solver the `update` scenario uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverChoice {
    /// Closed form when λ > 0, the zero-tempering limit when λ = 0.
    #[default]
    Auto,
    ClosedForm,
    Limit,
    Numeric,
}

impl SolverChoice {
    pub fn name(self) -> &'static str {
        match self {
            SolverChoice::Auto => "auto",
            SolverChoice::ClosedForm => "closed_form",
            SolverChoice::Limit => "limit",
            SolverChoice::Numeric => "numeric",
        }
    }

    fn parse(text: &str) -> Result<Self, CliError> {
        match text {
            "auto" => Ok(SolverChoice::Auto),
            "closed_form" => Ok(SolverChoice::ClosedForm),
            "limit" => Ok(SolverChoice::Limit),
            "numeric" => Ok(SolverChoice::Numeric),
            other => Err(CliError::validation(
                "solver",
                format!("unknown solver `{other}` (expected auto, closed_form, limit, or numeric)"),
            )),
        }
    }
}

/// One parameter axis: a single value, an explicit list, or a range.
///
/// Grammar shared by TOML values and flag strings:
/// * TOML: `1.5`, `[0.1, 1, 10]`, or `{ min = 0.1, max = 100, points = 101, scale = "log10" }`
///   (`scale` optional, `"linear"` by default)
/// * flags: `1.5`, `0.1,1,10`, or `0.1:100:101` with an optional `:log` suffix
#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    Scalar(f64),
    Values(Vec<f64>),
    Range {
        min: f64,
        max: f64,
        points: usize,
        log: bool,
    },
}

impl GridSpec {
    /// Expands to the concrete grid values.
    pub fn values(&self, field: &'static str) -> Result<Vec<f64>, CliError> {
        match self {
            GridSpec::Scalar(x) => Ok(vec![*x]),
            GridSpec::Values(v) => {
                if v.is_empty() {
                    return Err(CliError::validation(field, "value list must not be empty"));
                }
                Ok(v.clone())
            }
            GridSpec::Range {
                min,
                max,
                points,
                log,
            } => {
                if *points == 0 {
                    return Err(CliError::validation(field, "range needs points >= 1"));
                }
                if !(min.is_finite() && max.is_finite() && min <= max) {
                    return Err(CliError::validation(
                        field,
                        format!("range needs finite min <= max (got {min}..{max})"),
                    ));
                }
                if *log {
                    if *min <= 0.0 {
                        return Err(CliError::validation(
                            field,
                            "log-scaled range needs min > 0",
                        ));
                    }
                    Ok(logspace(*min, *max, *points))
                } else {
                    Ok(linspace(*min, *max, *points))
                }
            }
        }
    }

    /// Whether the grid is a single point.
    pub fn is_scalar(&self) -> bool {
        match self {
            GridSpec::Scalar(_) => true,
            GridSpec::Values(v) => v.len() == 1,
            GridSpec::Range { points, .. } => *points == 1,
        }
    }

    /// The single value of a scalar grid.
    fn scalar(&self, field: &'static str) -> Result<f64, CliError> {
        let values = self.values(field)?;
        if values.len() != 1 {
            return Err(CliError::validation(
                field,
                format!("expected a single value, got a grid of {}", values.len()),
            ));
        }
        Ok(values[0])
    }

    /// Parses the flag grammar: `x` | `a,b,c` | `min:max:points[:log]`.
    pub fn parse_flag(field: &'static str, text: &str) -> Result<Self, CliError> {
        let bad = |msg: String| CliError::validation(field, msg);
        if text.contains(':') {
            let parts: Vec<&str> = text.split(':').collect();
            if parts.len() < 3 || parts.len() > 4 {
                return Err(bad(format!(
                    "range grammar is min:max:points[:log], got `{text}`"
                )));
            }
            let min: f64 = parts[0]
                .parse()
                .map_err(|_| bad(format!("bad range min `{}`", parts[0])))?;
            let max: f64 = parts[1]
                .parse()
                .map_err(|_| bad(format!("bad range max `{}`", parts[1])))?;
            let points: usize = parts[2]
                .parse()
                .map_err(|_| bad(format!("bad range points `{}`", parts[2])))?;
            let log = match parts.get(3) {
                None => false,
                Some(&"log") => true,
                Some(other) => {
                    return Err(bad(format!(
                        "range suffix must be `log`, got `{other}`"
                    )))
                }
            };
            Ok(GridSpec::Range {
                min,
                max,
                points,
                log,
            })
        } else if text.contains(',') {
            let values: Result<Vec<f64>, _> =
                text.split(',').map(|p| p.trim().parse::<f64>()).collect();
            Ok(GridSpec::Values(values.map_err(|_| {
                bad(format!("bad value list `{text}`"))
            })?))
        } else {
            Ok(GridSpec::Scalar(text.trim().parse::<f64>().map_err(
                |_| bad(format!("bad number `{text}`")),
            )?))
        }
    }

    /// Canonical TOML rendering for the metadata echo.
    fn echo(&self) -> String {
        match self {
            GridSpec::Scalar(x) => fmt_toml_float(*x),
            GridSpec::Values(v) => fmt_toml_list(v),
            GridSpec::Range {
                min,
                max,
                points,
                log,
            } => format!(
                "{{ min = {}, max = {}, points = {}, scale = \"{}\" }}",
                fmt_toml_float(*min),
                fmt_toml_float(*max),
                points,
                if *log { "log10" } else { "linear" }
            ),
        }
    }
}

fn fmt_toml_float(x: f64) -> String {
    // `{:?}` prints the shortest digits that round-trip, and always keeps a
    // decimal point or exponent so TOML reads it back as a float.
    if x.is_finite() {
        let s = format!("{x:?}");
        if s.contains('.') || s.contains('e') || s.contains('E') {
            s
        } else {
            format!("{s}.0")
        }
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn fmt_toml_list(values: &[f64]) -> String {
    let mut out = String::from("[");
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&fmt_toml_float(*v));
    }
    out.push(']');
    out
}

/// How the evidence enters the run.
#[derive(Debug, Clone, PartialEq)]
pub enum EvidenceSpec {
    /// A grid of two-state evidence strengths `e` with likelihood `(e, 1-e)`.
    Strength(GridSpec),
    /// One explicit likelihood vector.
    Explicit(Vec<f64>),
    /// A labeled menu of likelihood vectors to choose between.
    Menu(Vec<(String, Vec<f64>)>),
}

/// Everything a run needs, fully resolved (defaults applied).
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub prior: Vec<f64>,
    pub coeffs: Vec<f64>,
    pub alpha: GridSpec,
    pub lambda: GridSpec,
    pub evidence: EvidenceSpec,
    pub lambda_range: (f64, f64),
    pub solver: SolverChoice,
    pub numeric: NumericSolverConfig,
    pub format: Format,
}

/// Raw key-value bag prior to validation: the TOML schema and the flag
/// overlay both land here.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    pub scenario: Option<String>,
    pub prior: Option<Vec<f64>>,
    pub coeffs: Option<Vec<f64>>,
    pub alpha: Option<GridSpec>,
    pub lambda: Option<GridSpec>,
    pub evidence: Option<GridSpec>,
    pub lik: Option<Vec<f64>>,
    pub menu: Option<Vec<(String, Vec<f64>)>>,
    pub lambda_range: Option<(f64, f64)>,
    pub solver: Option<String>,
    pub format: Option<String>,
    pub numeric: Option<RawNumeric>,
}

#[derive(Debug, Clone, Default, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawNumeric {
    pub max_iterations: Option<usize>,
    pub step_size: Option<f64>,
    pub gradient_tolerance: Option<f64>,
    pub finite_difference_step: Option<f64>,
}

/// Serde view of the TOML document.
#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct TomlConfig {
    scenario: Option<String>,
    prior: Option<Vec<f64>>,
    c: Option<Vec<f64>>,
    alpha: Option<TomlGrid>,
    lambda: Option<TomlGrid>,
    evidence: Option<TomlGrid>,
    lik: Option<Vec<f64>>,
    menu: Option<Vec<TomlMenuEntry>>,
    lambda_range: Option<[f64; 2]>,
    solver: Option<String>,
    format: Option<String>,
    numeric: Option<RawNumeric>,
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct TomlMenuEntry {
    label: Option<String>,
    lik: Vec<f64>,
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum TomlGrid {
    Scalar(f64),
    Values(Vec<f64>),
    Range {
        min: f64,
        max: f64,
        points: usize,
        #[serde(default)]
        scale: Option<String>,
    },
}

impl TomlGrid {
    fn into_spec(self, field: &'static str) -> Result<GridSpec, CliError> {
        Ok(match self {
            TomlGrid::Scalar(x) => GridSpec::Scalar(x),
            TomlGrid::Values(v) => GridSpec::Values(v),
            TomlGrid::Range {
                min,
                max,
                points,
                scale,
            } => {
                let log = match scale.as_deref() {
                    None | Some("linear") => false,
                    Some("log10") => true,
                    Some(other) => {
                        return Err(CliError::validation(
                            field,
                            format!("unknown scale `{other}` (expected linear or log10)"),
                        ))
                    }
                };
                GridSpec::Range {
                    min,
                    max,
                    points,
                    log,
                }
            }
        })
    }
}

/// Parses a TOML document into the raw bag. Parse errors carry the
/// location reported by the TOML parser.
pub fn load_config_text(text: &str) -> Result<RawConfig, CliError> {
    let parsed: TomlConfig =
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string().trim().to_string()))?;
    let mut raw = RawConfig {
        scenario: parsed.scenario,
        prior: parsed.prior,
        coeffs: parsed.c,
        lik: parsed.lik,
        lambda_range: parsed.lambda_range.map(|[lo, hi]| (lo, hi)),
        solver: parsed.solver,
        format: parsed.format,
        numeric: parsed.numeric,
        ..RawConfig::default()
    };
    if let Some(grid) = parsed.alpha {
        raw.alpha = Some(grid.into_spec("alpha")?);
    }
    if let Some(grid) = parsed.lambda {
        raw.lambda = Some(grid.into_spec("lambda")?);
    }
    if let Some(grid) = parsed.evidence {
        raw.evidence = Some(grid.into_spec("evidence")?);
    }
    if let Some(menu) = parsed.menu {
        raw.menu = Some(
            menu.into_iter()
                .enumerate()
                .map(|(i, entry)| {
                    let label = entry
                        .label
                        .unwrap_or_else(|| default_option_label(i));
                    (label, entry.lik)
                })
                .collect(),
        );
    }
    Ok(raw)
}

/// Reads and parses a TOML config file.
pub fn load_config_file(path: &Path) -> Result<RawConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Parse(format!("cannot read config `{}`: {e}", path.display()))
    })?;
    load_config_text(&text)
}

pub fn default_option_label(index: usize) -> String {
    // A, B, C, ... then option26, option27, ...
    if index < 26 {
        char::from(b'A' + index as u8).to_string()
    } else {
        format!("option{index}")
    }
}

/// Overlay: any field set in `over` replaces the one in `base`.
pub fn merge(base: RawConfig, over: RawConfig) -> RawConfig {
    RawConfig {
        scenario: over.scenario.or(base.scenario),
        prior: over.prior.or(base.prior),
        coeffs: over.coeffs.or(base.coeffs),
        alpha: over.alpha.or(base.alpha),
        lambda: over.lambda.or(base.lambda),
        evidence: over.evidence.or(base.evidence),
        lik: over.lik.or(base.lik),
        menu: over.menu.or(base.menu),
        lambda_range: over.lambda_range.or(base.lambda_range),
        solver: over.solver.or(base.solver),
        format: over.format.or(base.format),
        numeric: match (base.numeric, over.numeric) {
            (None, n) | (n, None) => n,
            (Some(b), Some(o)) => Some(RawNumeric {
                max_iterations: o.max_iterations.or(b.max_iterations),
                step_size: o.step_size.or(b.step_size),
                gradient_tolerance: o.gradient_tolerance.or(b.gradient_tolerance),
                finite_difference_step: o.finite_difference_step.or(b.finite_difference_step),
            }),
        },
    }
}

/// The built-in costly-confirmation menu, used as the selection default.
fn default_menu() -> Vec<(String, Vec<f64>)> {
    let scenario = credence::costly_confirmation_scenario();
    scenario
        .menu
        .iter()
        .map(|option| (option.label.clone(), option.lik.values().to_vec()))
        .collect()
}

/// Applies per-scenario defaults and validates every field, producing the
/// resolved configuration.
pub fn resolve(scenario: Scenario, raw: RawConfig) -> Result<RunConfig, CliError> {
    if let Some(named) = &raw.scenario {
        let from_file = Scenario::parse(named)?;
        if from_file != scenario {
            return Err(CliError::validation(
                "scenario",
                format!(
                    "config file says `{}` but the `{}` subcommand was invoked",
                    from_file.name(),
                    scenario.name()
                ),
            ));
        }
    }

    // --- prior --------------------------------------------------------
    let prior = raw.prior.unwrap_or_else(|| match scenario {
        Scenario::Polarize => vec![0.5, 0.5],
        _ => vec![0.3, 0.7],
    });
    let prior_dist = Categorical::new(prior.clone())
        .map_err(|e| CliError::validation("prior", e.to_string()))?;
    let n = prior_dist.n_states();
    if scenario != Scenario::Update && n != 2 {
        return Err(CliError::validation(
            "prior",
            format!(
                "the {} scenario needs a two-state prior, got {n} states",
                scenario.name()
            ),
        ));
    }

    // --- payoff coefficients -------------------------------------------
    let coeffs = match scenario {
        Scenario::Polarize => {
            if raw.coeffs.is_some() {
                return Err(CliError::validation(
                    "c",
                    "the polarize scenario fixes the agents' payoffs to (1,0) and (0,1)",
                ));
            }
            vec![1.0, 0.0]
        }
        Scenario::Update => raw.coeffs.unwrap_or_else(|| vec![0.0; n]),
        _ => raw.coeffs.unwrap_or_else(|| vec![1.0, 0.0]),
    };
    if coeffs.len() != n {
        return Err(CliError::validation(
            "c",
            format!("{} coefficients for {} states", coeffs.len(), n),
        ));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(CliError::validation("c", "coefficients must be finite"));
    }

    // --- weights --------------------------------------------------------
    let alpha = raw.alpha.unwrap_or(GridSpec::Scalar(match scenario {
        Scenario::Select | Scenario::Threshold => 2.0,
        _ => 1.0,
    }));
    let lambda = raw.lambda.unwrap_or(match scenario {
        Scenario::Heatmap => GridSpec::Range {
            min: 1.0,
            max: 10.0,
            points: 101,
            log: false,
        },
        Scenario::Polarize => GridSpec::Range {
            min: 0.0,
            max: 10.0,
            points: 101,
            log: false,
        },
        _ => GridSpec::Scalar(1.0),
    });
    for (field, grid) in [("alpha", &alpha), ("lambda", &lambda)] {
        for value in grid.values(field)? {
            if !value.is_finite() || value < 0.0 {
                return Err(CliError::validation(
                    field,
                    format!("values must be finite and >= 0, got {value}"),
                ));
            }
        }
    }
    let scalar_weights = matches!(
        scenario,
        Scenario::Update | Scenario::Select | Scenario::Threshold
    );
    if scalar_weights && !alpha.is_scalar() {
        return Err(CliError::validation(
            "alpha",
            format!("the {} scenario takes a single alpha", scenario.name()),
        ));
    }
    if matches!(scenario, Scenario::Update | Scenario::Threshold) && !lambda.is_scalar() {
        return Err(CliError::validation(
            "lambda",
            format!("the {} scenario takes a single lambda", scenario.name()),
        ));
    }
    if scenario == Scenario::Heatmap {
        let n_lambda = lambda.values("lambda")?.len();
        let n_alpha = alpha.values("alpha")?.len();
        if n_lambda < 2 || n_alpha < 2 {
            return Err(CliError::validation(
                if n_lambda < 2 { "lambda" } else { "alpha" },
                "the heatmap scenario needs grids of at least 2 points on both axes",
            ));
        }
    }

    // --- evidence -------------------------------------------------------
    let check_lik = |field: &'static str, values: &[f64], states: usize| -> Result<(), CliError> {
        let lik = Likelihood::new(values.to_vec())
            .map_err(|e| CliError::validation(field, e.to_string()))?;
        if lik.n_states() != states {
            return Err(CliError::validation(
                field,
                format!("{} entries for {} states", lik.n_states(), states),
            ));
        }
        Ok(())
    };
    let too_many = |field: &'static str| -> CliError {
        CliError::validation(
            field,
            format!("not accepted by the {} scenario", scenario.name()),
        )
    };
    let evidence = match scenario {
        Scenario::Update => {
            if raw.menu.is_some() {
                return Err(too_many("menu"));
            }
            match (raw.lik, raw.evidence) {
                (Some(_), Some(_)) => {
                    return Err(CliError::validation(
                        "lik",
                        "give either `lik` or `evidence`, not both",
                    ))
                }
                (Some(values), None) => {
                    check_lik("lik", &values, n)?;
                    EvidenceSpec::Explicit(values)
                }
                (None, Some(grid)) => {
                    let e = grid.scalar("evidence")?;
                    check_strengths("evidence", &[e])?;
                    EvidenceSpec::Strength(GridSpec::Scalar(e))
                }
                (None, None) => {
                    return Err(CliError::validation(
                        "lik",
                        "the update scenario needs a likelihood (`lik`) or an evidence strength (`evidence`)",
                    ))
                }
            }
        }
        Scenario::Sweep => {
            if raw.lik.is_some() {
                return Err(too_many("lik"));
            }
            if raw.menu.is_some() {
                return Err(too_many("menu"));
            }
            let grid = raw.evidence.unwrap_or(GridSpec::Range {
                min: 0.01,
                max: 0.99,
                points: 101,
                log: false,
            });
            check_strengths("evidence", &grid.values("evidence")?)?;
            EvidenceSpec::Strength(grid)
        }
        Scenario::Select | Scenario::Threshold => {
            if raw.lik.is_some() {
                return Err(too_many("lik"));
            }
            if raw.evidence.is_some() {
                return Err(too_many("evidence"));
            }
            let menu = raw.menu.unwrap_or_else(default_menu);
            validate_menu(&menu, n, scenario)?;
            EvidenceSpec::Menu(menu)
        }
        Scenario::Heatmap => {
            if raw.lik.is_some() {
                return Err(too_many("lik"));
            }
            match (raw.menu, raw.evidence) {
                (Some(_), Some(_)) => {
                    return Err(CliError::validation(
                        "menu",
                        "give either `menu` (decision boundary) or `evidence` (objective landscape), not both",
                    ))
                }
                (Some(menu), None) => {
                    validate_menu(&menu, n, scenario)?;
                    EvidenceSpec::Menu(menu)
                }
                (None, grid) => {
                    let e = grid
                        .unwrap_or(GridSpec::Scalar(0.3))
                        .scalar("evidence")?;
                    check_strengths("evidence", &[e])?;
                    EvidenceSpec::Strength(GridSpec::Scalar(e))
                }
            }
        }
        Scenario::Polarize => {
            if raw.menu.is_some() {
                return Err(too_many("menu"));
            }
            if raw.evidence.is_some() {
                return Err(too_many("evidence"));
            }
            let values = raw.lik.unwrap_or_else(|| vec![0.6, 0.4]);
            check_lik("lik", &values, 2)?;
            EvidenceSpec::Explicit(values)
        }
    };

    // --- threshold range --------------------------------------------------
    let lambda_range = raw.lambda_range.unwrap_or(credence::DEFAULT_THRESHOLD_RANGE);
    if scenario == Scenario::Threshold {
        let (lo, hi) = lambda_range;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
            return Err(CliError::validation(
                "lambda_range",
                format!("needs 0 < low < high, got ({lo}, {hi})"),
            ));
        }
    } else if raw.lambda_range.is_some() {
        return Err(too_many("lambda_range"));
    }

    // --- solver -----------------------------------------------------------
    let solver = match raw.solver {
        None => SolverChoice::Auto,
        Some(name) => {
            if scenario != Scenario::Update {
                return Err(CliError::validation(
                    "solver",
                    "only the update scenario takes a solver choice",
                ));
            }
            SolverChoice::parse(&name)?
        }
    };
    let mut numeric = NumericSolverConfig::default();
    if let Some(rawn) = raw.numeric {
        if scenario != Scenario::Update {
            return Err(CliError::validation(
                "numeric",
                "only the update scenario takes numeric solver settings",
            ));
        }
        if let Some(v) = rawn.max_iterations {
            numeric.max_iterations = v;
        }
        if let Some(v) = rawn.step_size {
            numeric.step_size = v;
        }
        if let Some(v) = rawn.gradient_tolerance {
            numeric.gradient_tolerance = v;
        }
        if let Some(v) = rawn.finite_difference_step {
            numeric.finite_difference_step = v;
        }
    }
    if solver == SolverChoice::Numeric {
        let lambda_value = lambda.scalar("lambda")?;
        if lambda_value == 0.0 {
            return Err(CliError::validation(
                "lambda",
                "the numeric solver needs lambda > 0 (use solver = \"limit\" for lambda = 0)",
            ));
        }
    }

    let format = match raw.format {
        None => Format::Csv,
        Some(name) => Format::parse(&name)?,
    };

    Ok(RunConfig {
        scenario,
        prior,
        coeffs,
        alpha,
        lambda,
        evidence,
        lambda_range,
        solver,
        numeric,
        format,
    })
}

fn check_strengths(field: &'static str, values: &[f64]) -> Result<(), CliError> {
    for &e in values {
        if !e.is_finite() || !(0.0..=1.0).contains(&e) {
            return Err(CliError::validation(
                field,
                format!("evidence strengths must lie in [0, 1], got {e}"),
            ));
        }
    }
    Ok(())
}

fn validate_menu(
    menu: &[(String, Vec<f64>)],
    n: usize,
    scenario: Scenario,
) -> Result<(), CliError> {
    if menu.is_empty() {
        return Err(CliError::validation("menu", "must contain at least one option"));
    }
    if scenario == Scenario::Threshold && menu.len() != 2 {
        return Err(CliError::validation(
            "menu",
            format!(
                "the threshold scenario compares exactly 2 options, got {}",
                menu.len()
            ),
        ));
    }
    for (label, values) in menu {
        let lik = Likelihood::new(values.clone())
            .map_err(|e| CliError::validation("menu", format!("option `{label}`: {e}")))?;
        if lik.n_states() != n {
            return Err(CliError::validation(
                "menu",
                format!(
                    "option `{label}` has {} entries for {} states",
                    lik.n_states(),
                    n
                ),
            ));
        }
    }
    Ok(())
}

impl RunConfig {
    pub fn prior_dist(&self) -> Categorical {
        Categorical::new(self.prior.clone()).expect("validated at resolve time")
    }

    pub fn utility(&self) -> credence::LinearAffectiveUtility {
        credence::LinearAffectiveUtility::new(self.coeffs.clone())
            .expect("validated at resolve time")
    }

    pub fn menu_options(&self) -> Vec<EvidenceOption> {
        match &self.evidence {
            EvidenceSpec::Menu(menu) => menu
                .iter()
                .map(|(label, values)| {
                    EvidenceOption::new(
                        label.clone(),
                        Likelihood::new(values.clone()).expect("validated at resolve time"),
                    )
                })
                .collect(),
            _ => panic!("scenario without a menu asked for menu options"),
        }
    }

    /// The config echo: ordered `key = value` pairs, each value valid TOML,
    /// covering every parameter of the run (defaults included) except
    /// output locations.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut pairs: Vec<(String, String)> = vec![
            (
                "scenario".into(),
                format!("\"{}\"", self.scenario.name()),
            ),
            ("prior".into(), fmt_toml_list(&self.prior)),
        ];
        if self.scenario != Scenario::Polarize {
            pairs.push(("c".into(), fmt_toml_list(&self.coeffs)));
        }
        pairs.push(("alpha".into(), self.alpha.echo()));
        pairs.push(("lambda".into(), self.lambda.echo()));
        match &self.evidence {
            EvidenceSpec::Strength(grid) => pairs.push(("evidence".into(), grid.echo())),
            EvidenceSpec::Explicit(values) => pairs.push(("lik".into(), fmt_toml_list(values))),
            EvidenceSpec::Menu(menu) => {
                let mut rendered = String::from("[");
                for (i, (label, values)) in menu.iter().enumerate() {
                    if i > 0 {
                        rendered.push_str(", ");
                    }
                    let _ = write!(
                        rendered,
                        "{{ label = \"{}\", lik = {} }}",
                        label,
                        fmt_toml_list(values)
                    );
                }
                rendered.push(']');
                pairs.push(("menu".into(), rendered));
            }
        }
        if self.scenario == Scenario::Threshold {
            pairs.push((
                "lambda_range".into(),
                format!(
                    "[{}, {}]",
                    fmt_toml_float(self.lambda_range.0),
                    fmt_toml_float(self.lambda_range.1)
                ),
            ));
        }
        if self.scenario == Scenario::Update {
            pairs.push((
                "solver".into(),
                format!("\"{}\"", self.solver.name()),
            ));
            if self.solver == SolverChoice::Numeric {
                pairs.push((
                    "numeric.max_iterations".into(),
                    self.numeric.max_iterations.to_string(),
                ));
                pairs.push((
                    "numeric.step_size".into(),
                    fmt_toml_float(self.numeric.step_size),
                ));
                pairs.push((
                    "numeric.gradient_tolerance".into(),
                    fmt_toml_float(self.numeric.gradient_tolerance),
                ));
                pairs.push((
                    "numeric.finite_difference_step".into(),
                    fmt_toml_float(self.numeric.finite_difference_step),
                ));
            }
        }
        pairs.push(("format".into(), format!("\"{}\"", self.format.name())));
        pairs
    }
}
