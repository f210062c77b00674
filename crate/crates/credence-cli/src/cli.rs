//! Command definitions and scenario execution: flag parsing, the
//! config-file/flag overlay, running the selected scenario through the
//! library, and writing tables/plots with atomic file replacement.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use credence::experiments::logspace;
use credence::{
    evidence_strength_sweep, linear_update, objective_landscape_heatmap, polarization_sweep,
    select_evidence, selection_boundary_heatmap, selection_objective_sweep, selection_threshold,
    AxisScale, BernoulliEvidence, Likelihood, SweepResult,
};

use crate::config::{
    self, default_option_label, merge, resolve, EvidenceSpec, Format, GridSpec, RawConfig,
    RunConfig, Scenario, SolverChoice,
};
use crate::plot::{self, PlotKind};
use crate::table::{self, OutputTable};
use crate::CliError;

/// Belief updating with payoff-dependent posteriors.
///
/// Computes posteriors that trade expected payoff against accuracy and
/// a divergence penalty toward the prior, and reproduces the standard
/// experiment suite built on that update rule.
#[derive(Parser, Debug)]
#[command(name = "credence", version, about, max_term_width = 100)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute one posterior from a prior, likelihood, and payoffs.
    Update(ScenarioArgs),
    /// Sweep the posterior across evidence strengths and weight grids.
    Sweep(ScenarioArgs),
    /// Choose the best evidence source from a menu at fixed weights.
    Select(ScenarioArgs),
    /// Locate the tempering weight where the preferred source flips.
    Threshold(ScenarioArgs),
    /// Map the objective or a decision boundary over a (lambda, alpha) grid.
    Heatmap(ScenarioArgs),
    /// Run two agents with opposed payoffs on the same evidence.
    Polarize(ScenarioArgs),
    /// Regenerate a canned experiment bundle (fig3|fig4|fig5|fig6|fig7).
    Reproduce {
        /// Which bundle to regenerate: fig3, fig4, fig5, fig6, or fig7.
        figure: String,
        /// Directory that receives the bundle's CSV and SVG files.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

/// Flags shared by every scenario subcommand. Grid-valued flags accept
/// `x`, `a,b,c`, or `min:max:points[:log]`.
#[derive(Args, Debug, Default)]
pub struct ScenarioArgs {
    /// TOML config file; explicit flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Prior distribution, e.g. 0.3,0.7.
    #[arg(long)]
    pub prior: Option<String>,
    /// Payoff coefficients per state, e.g. 1,0.
    #[arg(long)]
    pub c: Option<String>,
    /// Accuracy weight (grid allowed where the scenario sweeps it).
    #[arg(long)]
    pub alpha: Option<String>,
    /// Tempering weight (grid allowed where the scenario sweeps it).
    #[arg(long)]
    pub lambda: Option<String>,
    /// Two-state evidence strength in [0,1] (grid allowed in sweeps).
    #[arg(long)]
    pub evidence: Option<String>,
    /// Explicit likelihood vector, e.g. 0.7,0.3.
    #[arg(long)]
    pub lik: Option<String>,
    /// Evidence menu: options separated by `;`, each `label=v1,v2` or `v1,v2`.
    #[arg(long)]
    pub menu: Option<String>,
    /// Search range for the threshold scenario, as low:high.
    #[arg(long = "lambda-range")]
    pub lambda_range: Option<String>,
    /// Update solver: auto, closed_form, limit, or numeric.
    #[arg(long)]
    pub solver: Option<String>,
    /// Output format: csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also render an SVG plot to this path.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    /// Plot shape: line or heatmap (default depends on the scenario).
    #[arg(long = "plot-kind")]
    pub plot_kind: Option<String>,
}

fn parse_list(field: &'static str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|_| CliError::validation(field, format!("bad value list `{text}`")))
}

fn parse_menu(text: &str) -> Result<Vec<(String, Vec<f64>)>, CliError> {
    text.split(';')
        .enumerate()
        .map(|(i, part)| {
            let part = part.trim();
            let (label, values) = match part.split_once('=') {
                Some((label, values)) => (label.trim().to_string(), values),
                None => (default_option_label(i), part),
            };
            Ok((label, parse_list("menu", values)?))
        })
        .collect()
}

fn parse_lambda_range(text: &str) -> Result<(f64, f64), CliError> {
    let bad = || {
        CliError::validation(
            "lambda_range",
            format!("range grammar is low:high, got `{text}`"),
        )
    };
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    Ok((
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    ))
}

/// Converts the flag set into a raw config overlay.
fn flags_to_raw(args: &ScenarioArgs) -> Result<RawConfig, CliError> {
    let mut raw = RawConfig::default();
    if let Some(text) = &args.prior {
        raw.prior = Some(parse_list("prior", text)?);
    }
    if let Some(text) = &args.c {
        raw.coeffs = Some(parse_list("c", text)?);
    }
    if let Some(text) = &args.alpha {
        raw.alpha = Some(GridSpec::parse_flag("alpha", text)?);
    }
    if let Some(text) = &args.lambda {
        raw.lambda = Some(GridSpec::parse_flag("lambda", text)?);
    }
    if let Some(text) = &args.evidence {
        raw.evidence = Some(GridSpec::parse_flag("evidence", text)?);
    }
    if let Some(text) = &args.lik {
        raw.lik = Some(parse_list("lik", text)?);
    }
    if let Some(text) = &args.menu {
        raw.menu = Some(parse_menu(text)?);
    }
    if let Some(text) = &args.lambda_range {
        raw.lambda_range = Some(parse_lambda_range(text)?);
    }
    raw.solver = args.solver.clone();
    raw.format = args.format.clone();
    Ok(raw)
}

/// A scenario's results: the table that is always produced, plus the sweep
/// behind it when one exists (needed for plotting).
struct Execution {
    table: OutputTable,
    sweep: Option<SweepResult>,
}

/// Top-level dispatch, called by `run` after argument parsing.
pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Update(args) => run_scenario(Scenario::Update, args),
        Command::Sweep(args) => run_scenario(Scenario::Sweep, args),
        Command::Select(args) => run_scenario(Scenario::Select, args),
        Command::Threshold(args) => run_scenario(Scenario::Threshold, args),
        Command::Heatmap(args) => run_scenario(Scenario::Heatmap, args),
        Command::Polarize(args) => run_scenario(Scenario::Polarize, args),
        Command::Reproduce { figure, out } => reproduce(&figure, &out),
    }
}

fn run_scenario(scenario: Scenario, args: ScenarioArgs) -> Result<(), CliError> {
    let from_file = match &args.config {
        Some(path) => config::load_config_file(path)?,
        None => RawConfig::default(),
    };
    let raw = merge(from_file, flags_to_raw(&args)?);
    let config = resolve(scenario, raw)?;
    let execution = run_config(&config, args.plot.is_some())?;

    let rendered = match config.format {
        Format::Csv => execution.table.to_csv(),
        Format::Json => execution.table.to_json(),
    };
    match &args.out {
        Some(path) => {
            write_atomic(path, &rendered)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{rendered}"),
    }

    if let Some(plot_path) = &args.plot {
        let kind = match &args.plot_kind {
            Some(text) => PlotKind::parse(text)?,
            None => default_plot_kind(scenario),
        };
        let sweep = execution.sweep.as_ref().ok_or_else(|| {
            CliError::AxisMismatch(format!(
                "the {} run produced no swept data to plot",
                scenario.name()
            ))
        })?;
        let svg = plot::render(sweep, kind)?;
        write_atomic(plot_path, &svg)?;
        eprintln!("wrote {}", plot_path.display());
    }
    Ok(())
}

fn default_plot_kind(scenario: Scenario) -> PlotKind {
    match scenario {
        Scenario::Heatmap => PlotKind::Heatmap,
        _ => PlotKind::Line,
    }
}

/// Marks sweep axes that came from log-spaced grids so plots position
/// their cells and ticks logarithmically.
fn apply_axis_scales(sweep: &mut SweepResult, config: &RunConfig) {
    let log_specs: [(&str, &GridSpec); 2] = [("lambda", &config.lambda), ("alpha", &config.alpha)];
    for (name, spec) in log_specs {
        if let GridSpec::Range { log: true, .. } = spec {
            if let Some(axis) = sweep.axes.iter_mut().find(|a| a.name == name) {
                axis.scale = AxisScale::Log10;
            }
        }
    }
    if let EvidenceSpec::Strength(GridSpec::Range { log: true, .. }) = &config.evidence {
        if let Some(axis) = sweep.axes.iter_mut().find(|a| a.name == "evidence") {
            axis.scale = AxisScale::Log10;
        }
    }
}

/// Runs the resolved configuration through the library.
fn run_config(config: &RunConfig, want_plot: bool) -> Result<Execution, CliError> {
    let prior = config.prior_dist();
    let utility = config.utility();
    match config.scenario {
        Scenario::Update => {
            let alpha = grid_scalar(&config.alpha, "alpha")?;
            let lambda = grid_scalar(&config.lambda, "lambda")?;
            let lik = match &config.evidence {
                EvidenceSpec::Explicit(values) => Likelihood::new(values.clone())?,
                EvidenceSpec::Strength(grid) => {
                    BernoulliEvidence::new(grid_scalar(grid, "evidence")?)?.likelihood()
                }
                EvidenceSpec::Menu(_) => unreachable!("update never resolves to a menu"),
            };
            let result = match config.solver {
                SolverChoice::Auto => linear_update(&prior, &lik, &utility, alpha, lambda)?,
                SolverChoice::ClosedForm => {
                    credence::closed_form_update(&prior, &lik, &utility, alpha, lambda)?
                }
                SolverChoice::Limit => {
                    if lambda != 0.0 {
                        return Err(CliError::validation(
                            "lambda",
                            "the limit solver computes the lambda -> 0 limit; set lambda = 0",
                        ));
                    }
                    credence::limit_update(&prior, &lik, &utility, alpha)?
                }
                SolverChoice::Numeric => credence::numeric_update(
                    &prior,
                    &lik,
                    &utility,
                    alpha,
                    lambda,
                    &config.numeric,
                )?,
            };
            Ok(Execution {
                table: table::from_update(config, &result),
                sweep: None,
            })
        }
        Scenario::Sweep => {
            let lambdas = config.lambda.values("lambda")?;
            let alphas = config.alpha.values("alpha")?;
            let strengths = match &config.evidence {
                EvidenceSpec::Strength(grid) => grid.values("evidence")?,
                _ => unreachable!("sweep always resolves to strengths"),
            };
            let evidence: Vec<BernoulliEvidence> = strengths
                .iter()
                .map(|&e| BernoulliEvidence::new(e))
                .collect::<credence::Result<_>>()?;
            let mut sweep =
                evidence_strength_sweep(&prior, &utility, &lambdas, &alphas, &evidence)?;
            apply_axis_scales(&mut sweep, config);
            Ok(Execution {
                table: table::from_sweep(config, &sweep),
                sweep: Some(sweep),
            })
        }
        Scenario::Select => {
            let alpha = grid_scalar(&config.alpha, "alpha")?;
            let menu = config.menu_options();
            if config.lambda.is_scalar() {
                let lambda = grid_scalar(&config.lambda, "lambda")?;
                let outcome = select_evidence(&prior, &utility, alpha, lambda, &menu)?;
                Ok(Execution {
                    table: table::from_selection(config, &outcome),
                    sweep: None,
                })
            } else {
                if menu.len() != 2 {
                    return Err(CliError::validation(
                        "menu",
                        format!(
                            "selection across a lambda grid compares exactly 2 options, got {}",
                            menu.len()
                        ),
                    ));
                }
                let lambdas = config.lambda.values("lambda")?;
                let mut sweep =
                    selection_objective_sweep(&prior, &utility, alpha, &menu, &lambdas)?;
                apply_axis_scales(&mut sweep, config);
                Ok(Execution {
                    table: table::from_sweep(config, &sweep),
                    sweep: Some(sweep),
                })
            }
        }
        Scenario::Threshold => {
            let alpha = grid_scalar(&config.alpha, "alpha")?;
            let menu = config.menu_options();
            let threshold =
                selection_threshold(&prior, &utility, alpha, &menu, config.lambda_range)?;
            let sweep = if want_plot {
                let (lo, hi) = config.lambda_range;
                let lambdas = logspace(lo, hi, 101);
                let mut sweep =
                    selection_objective_sweep(&prior, &utility, alpha, &menu, &lambdas)?;
                if let Some(axis) = sweep.axes.iter_mut().find(|a| a.name == "lambda") {
                    axis.scale = AxisScale::Log10;
                }
                Some(sweep)
            } else {
                None
            };
            Ok(Execution {
                table: table::from_threshold(config, threshold),
                sweep,
            })
        }
        Scenario::Heatmap => {
            let lambdas = config.lambda.values("lambda")?;
            let alphas = config.alpha.values("alpha")?;
            let mut sweep = match &config.evidence {
                EvidenceSpec::Strength(grid) => {
                    let evidence = BernoulliEvidence::new(grid_scalar(grid, "evidence")?)?;
                    objective_landscape_heatmap(&prior, &utility, evidence, &lambdas, &alphas)?
                }
                EvidenceSpec::Menu(_) => {
                    let menu = config.menu_options();
                    selection_boundary_heatmap(&prior, &utility, &menu, &lambdas, &alphas)?
                }
                EvidenceSpec::Explicit(_) => {
                    unreachable!("heatmap resolves to a strength or a menu")
                }
            };
            apply_axis_scales(&mut sweep, config);
            Ok(Execution {
                table: table::from_sweep(config, &sweep),
                sweep: Some(sweep),
            })
        }
        Scenario::Polarize => {
            let lik = match &config.evidence {
                EvidenceSpec::Explicit(values) => Likelihood::new(values.clone())?,
                _ => unreachable!("polarize always resolves to an explicit likelihood"),
            };
            let lambdas = config.lambda.values("lambda")?;
            let alphas = config.alpha.values("alpha")?;
            let mut sweep = polarization_sweep(&prior, &lik, &lambdas, &alphas)?;
            apply_axis_scales(&mut sweep, config);
            Ok(Execution {
                table: table::from_sweep(config, &sweep),
                sweep: Some(sweep),
            })
        }
    }
}

fn grid_scalar(grid: &GridSpec, field: &'static str) -> Result<f64, CliError> {
    let values = grid.values(field)?;
    if values.len() != 1 {
        return Err(CliError::validation(
            field,
            format!("expected a single value, got a grid of {}", values.len()),
        ));
    }
    Ok(values[0])
}

/// Writes `content` to `path` through a sibling temp file and an atomic
/// rename, so a crash mid-write never leaves a truncated result file.
pub fn write_atomic(path: &Path, content: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::validation("out", "output path has no file name"))?;
    let mut tmp_name = file_name.to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Canned experiment bundles
// ---------------------------------------------------------------------------

/// One output pair of a bundle: run the scenario described by `raw`, write
/// `<stem>.csv`, and optionally `<stem>.svg` with the given plot kind.
fn emit_bundle_item(
    dir: &Path,
    stem: &str,
    scenario: Scenario,
    raw: RawConfig,
    plot_kind: Option<PlotKind>,
) -> Result<(), CliError> {
    let config = resolve(scenario, raw)?;
    let execution = run_config(&config, plot_kind.is_some())?;
    let csv_path = dir.join(format!("{stem}.csv"));
    write_atomic(&csv_path, &execution.table.to_csv())?;
    eprintln!("wrote {}", csv_path.display());
    if let Some(kind) = plot_kind {
        let sweep = execution.sweep.as_ref().ok_or_else(|| {
            CliError::AxisMismatch(format!("bundle item {stem} produced no swept data"))
        })?;
        let svg_path = dir.join(format!("{stem}.svg"));
        write_atomic(&svg_path, &plot::render(sweep, kind)?)?;
        eprintln!("wrote {}", svg_path.display());
    }
    Ok(())
}

fn grid(min: f64, max: f64, points: usize, log: bool) -> GridSpec {
    GridSpec::Range {
        min,
        max,
        points,
        log,
    }
}

/// Menu entries of a built-in selection scenario as raw config values.
fn scenario_menu(scenario: &credence::SelectionScenario) -> Vec<(String, Vec<f64>)> {
    scenario
        .menu
        .iter()
        .map(|option| (option.label.clone(), option.lik.values().to_vec()))
        .collect()
}

fn reproduce(figure: &str, dir: &Path) -> Result<(), CliError> {
    match figure {
        "fig3" => {
            // Posterior vs evidence strength: one curve per tempering
            // weight at alpha = 1, then one curve per accuracy weight at
            // lambda = 1, each against the payoff-free reference.
            let series: Vec<f64> = (1..=10).map(|k| k as f64).collect();
            emit_bundle_item(
                dir,
                "fig3_lambda",
                Scenario::Sweep,
                RawConfig {
                    lambda: Some(GridSpec::Values(series.clone())),
                    alpha: Some(GridSpec::Scalar(1.0)),
                    ..RawConfig::default()
                },
                Some(PlotKind::Line),
            )?;
            emit_bundle_item(
                dir,
                "fig3_alpha",
                Scenario::Sweep,
                RawConfig {
                    lambda: Some(GridSpec::Scalar(1.0)),
                    alpha: Some(GridSpec::Values(series)),
                    ..RawConfig::default()
                },
                Some(PlotKind::Line),
            )
        }
        "fig4" => {
            // Two-option evidence choice across tempering weights, for a
            // payoff-confirming-but-weak source versus an accurate one,
            // plus the flip point of each menu.
            let costly = credence::costly_confirmation_scenario();
            let cheap = credence::cheap_confirmation_scenario();
            for (stem, scenario) in [("fig4_costly", &costly), ("fig4_cheap", &cheap)] {
                emit_bundle_item(
                    dir,
                    stem,
                    Scenario::Select,
                    RawConfig {
                        prior: Some(scenario.prior.probs().to_vec()),
                        coeffs: Some(scenario.utility.coeffs().to_vec()),
                        alpha: Some(GridSpec::Scalar(scenario.alpha)),
                        lambda: Some(grid(0.1, 100.0, 101, true)),
                        menu: Some(scenario_menu(scenario)),
                        ..RawConfig::default()
                    },
                    Some(PlotKind::Line),
                )?;
                emit_bundle_item(
                    dir,
                    &format!("{stem}_threshold"),
                    Scenario::Threshold,
                    RawConfig {
                        prior: Some(scenario.prior.probs().to_vec()),
                        coeffs: Some(scenario.utility.coeffs().to_vec()),
                        alpha: Some(GridSpec::Scalar(scenario.alpha)),
                        menu: Some(scenario_menu(scenario)),
                        ..RawConfig::default()
                    },
                    None,
                )?;
            }
            Ok(())
        }
        "fig5" => {
            // Belief gap between two opposed agents: over tempering
            // weights at alpha = 1, and over accuracy weights at
            // lambda = 1.
            emit_bundle_item(
                dir,
                "fig5_lambda",
                Scenario::Polarize,
                RawConfig {
                    lambda: Some(grid(0.0, 10.0, 101, false)),
                    alpha: Some(GridSpec::Scalar(1.0)),
                    ..RawConfig::default()
                },
                Some(PlotKind::Line),
            )?;
            emit_bundle_item(
                dir,
                "fig5_alpha",
                Scenario::Polarize,
                RawConfig {
                    lambda: Some(GridSpec::Scalar(1.0)),
                    alpha: Some(grid(0.0, 10.0, 101, false)),
                    ..RawConfig::default()
                },
                Some(PlotKind::Line),
            )
        }
        "fig6" => {
            // Objective total and posterior over a (lambda, alpha) grid,
            // once for evidence leaning toward the payoff-favored state
            // and once leaning against it.
            for (stem, strength) in [("fig6_e03", 0.3), ("fig6_e07", 0.7)] {
                emit_bundle_item(
                    dir,
                    stem,
                    Scenario::Heatmap,
                    RawConfig {
                        evidence: Some(GridSpec::Scalar(strength)),
                        lambda: Some(grid(1.0, 10.0, 101, false)),
                        alpha: Some(grid(1.0, 10.0, 101, false)),
                        ..RawConfig::default()
                    },
                    Some(PlotKind::Heatmap),
                )?;
            }
            Ok(())
        }
        "fig7" => {
            // Decision boundary of the two-option choice over a
            // (lambda, alpha) grid.
            let costly = credence::costly_confirmation_scenario();
            emit_bundle_item(
                dir,
                "fig7",
                Scenario::Heatmap,
                RawConfig {
                    prior: Some(costly.prior.probs().to_vec()),
                    coeffs: Some(costly.utility.coeffs().to_vec()),
                    menu: Some(scenario_menu(&costly)),
                    lambda: Some(grid(0.1, 100.0, 101, true)),
                    alpha: Some(grid(1.0, 10.0, 101, false)),
                    ..RawConfig::default()
                },
                Some(PlotKind::Heatmap),
            )
        }
        other => Err(CliError::validation(
            "figure",
            format!("unknown bundle `{other}` (expected fig3, fig4, fig5, fig6, or fig7)"),
        )),
    }
}
