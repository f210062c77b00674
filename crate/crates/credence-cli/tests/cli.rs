//! End-to-end tests of the `credence` binary: flag and config-file
//! handling, exit codes, output formats, determinism, and the
//! re-run-from-metadata property.

use std::process::{Command, Output};

fn credence(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_credence"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

/// Data rows of a CSV document (everything after the `#` metadata and the
/// header line), split into fields.
fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .map(|l| l.split(',').map(|f| f.to_string()).collect())
        .collect()
}

#[test]
fn update_with_flat_payoffs_recovers_the_even_posterior() {
    let out = credence(&[
        "update", "--prior", "0.3,0.7", "--lik", "0.7,0.3", "--c", "0,0", "--alpha", "1",
        "--lambda", "1",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let rows = data_rows(&stdout(&out));
    assert_eq!(rows.len(), 1);
    let q0: f64 = rows[0][0].parse().unwrap();
    let q1: f64 = rows[0][1].parse().unwrap();
    assert!((q0 - 0.5).abs() < 1e-11, "q0 = {q0}");
    assert!((q1 - 0.5).abs() < 1e-11, "q1 = {q1}");
}

#[test]
fn unknown_subcommand_prints_usage_and_exits_one() {
    let out = credence(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("Usage"), "stderr: {}", stderr(&out));
}

#[test]
fn help_exits_zero() {
    let out = credence(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Usage"));
}

#[test]
fn unnormalized_prior_exits_one_naming_the_field() {
    let out = credence(&["update", "--prior", "0.3,0.6", "--lik", "0.7,0.3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("prior"), "stderr: {}", stderr(&out));
}

#[test]
fn negative_lambda_exits_one_naming_the_field() {
    let out = credence(&["update", "--lik", "0.7,0.3", "--lambda=-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("lambda"), "stderr: {}", stderr(&out));
}

#[test]
fn broken_config_file_reports_a_parse_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.toml");
    std::fs::write(&path, "prior = [0.3,\n").unwrap();
    let out = credence(&["update", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stderr(&out);
    assert!(
        text.contains("line") || text.contains("column"),
        "stderr: {text}"
    );
}

#[test]
fn unknown_config_key_is_rejected_with_its_name() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.toml");
    std::fs::write(&path, "piror = [0.3, 0.7]\n").unwrap();
    let out = credence(&["update", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("piror"), "stderr: {}", stderr(&out));
}

#[test]
fn flags_override_config_file_fields() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.toml");
    std::fs::write(
        &path,
        "scenario = \"update\"\nprior = [0.5, 0.5]\nlik = [0.7, 0.3]\nlambda = 5.0\n",
    )
    .unwrap();
    let out = credence(&[
        "update",
        "--config",
        path.to_str().unwrap(),
        "--lambda",
        "1",
        "--c",
        "0,0",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("# lambda = 1.0"), "output: {text}");
    assert!(text.contains("# prior = [0.5, 0.5]"), "output: {text}");
    // Flat payoffs at alpha = lambda = 1 reduce to the plain conditioning
    // posterior of a (0.5, 0.5) prior with this likelihood: 0.7.
    let q0: f64 = data_rows(&text)[0][0].parse().unwrap();
    assert!((q0 - 0.7).abs() < 1e-11, "q0 = {q0}");
}

#[test]
fn scenario_conflict_between_file_and_subcommand_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.toml");
    std::fs::write(&path, "scenario = \"sweep\"\n").unwrap();
    let out = credence(&["update", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("scenario"));
}

#[test]
fn sweep_emits_one_row_per_grid_cell() {
    let out = credence(&["sweep", "--lambda", "1,10", "--evidence", "0.01:0.99:101"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 202);
    // Axis columns lead each row: lambda, alpha, evidence.
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(
        header,
        "lambda,alpha,evidence,posterior_q0,bayes_q0,utility,accuracy,complexity,total"
    );
}

#[test]
fn csv_reals_match_full_precision_to_twelve_digits() {
    let args = [
        "update", "--prior", "0.3,0.7", "--lik", "0.7,0.3", "--c", "1,0", "--alpha", "1",
        "--lambda", "1",
    ];
    let csv = credence(&args);
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let json = credence(&json_args);
    assert_eq!(csv.status.code(), Some(0));
    assert_eq!(json.status.code(), Some(0));

    let csv_values: Vec<f64> = data_rows(&stdout(&csv))[0]
        .iter()
        .map(|f| f.parse().unwrap())
        .collect();
    // Pull the record's values out of the JSON document in field order.
    let json_text = stdout(&json);
    let record_start = json_text.find("\"records\"").unwrap();
    let record = &json_text[record_start..];
    let mut json_values = Vec::new();
    for key in ["q0", "q1", "utility", "accuracy", "complexity", "total"] {
        let pos = record.find(&format!("\"{key}\": ")).unwrap();
        let rest = &record[pos + key.len() + 4..];
        let end = rest
            .find([',', '}'])
            .unwrap();
        json_values.push(rest[..end].trim().parse::<f64>().unwrap());
    }
    for (c, j) in csv_values.iter().zip(&json_values) {
        let scale = j.abs().max(1e-300);
        assert!(
            ((c - j) / scale).abs() < 1e-11,
            "csv {c} vs full-precision {j}"
        );
    }
}

#[test]
fn json_output_nests_metadata_and_records() {
    let out = credence(&["update", "--lik", "0.7,0.3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\"metadata\""));
    assert!(text.contains("\"records\""));
    assert!(text.contains("\"scenario\""));
    assert!(text.contains("\"q0\""));
}

#[test]
fn metadata_echo_covers_every_resolved_field() {
    // Run with almost everything defaulted; the echo must still list the
    // resolved value of each parameter the run used.
    let out = credence(&["update", "--lik", "0.7,0.3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for key in [
        "# scenario =",
        "# prior =",
        "# c =",
        "# alpha =",
        "# lambda =",
        "# lik =",
        "# solver =",
        "# format =",
    ] {
        assert!(text.contains(key), "echo missing `{key}`:\n{text}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["polarize", "--lambda", "0:10:51", "--alpha", "1"];
    let first = credence(&args);
    let second = credence(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn a_result_file_re_runs_to_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let first_path = dir.path().join("first.csv");
    let out = credence(&[
        "sweep",
        "--lambda",
        "0.5,2",
        "--evidence",
        "0.1:0.9:9",
        "--out",
        first_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    // Reconstruct a config file from the result's metadata lines alone.
    let first = std::fs::read_to_string(&first_path).unwrap();
    let config_text: String = first
        .lines()
        .filter_map(|l| l.strip_prefix("# "))
        .map(|l| format!("{l}\n"))
        .collect();
    let config_path = dir.path().join("rerun.toml");
    std::fs::write(&config_path, config_text).unwrap();

    let second_path = dir.path().join("second.csv");
    let rerun = credence(&[
        "sweep",
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        second_path.to_str().unwrap(),
    ]);
    assert_eq!(rerun.status.code(), Some(0), "stderr: {}", stderr(&rerun));
    let second = std::fs::read_to_string(&second_path).unwrap();
    assert_eq!(first, second);
}

#[test]
fn output_files_are_written_without_leftover_temporaries() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested").join("run.csv");
    let out = credence(&[
        "update",
        "--lik",
        "0.7,0.3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(path.exists());
    let leftovers: Vec<_> = std::fs::read_dir(path.parent().unwrap())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "tmp"))
        .collect();
    assert!(leftovers.is_empty(), "temp files left: {leftovers:?}");
    // Data went to the file, not stdout.
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("wrote"));
}

#[test]
fn select_with_scalar_lambda_lists_each_option_once() {
    let out = credence(&["select", "--lambda", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = data_rows(&stdout(&out));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "A");
    assert_eq!(rows[1][0], "B");
    let chosen: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert_eq!(chosen.iter().sum::<f64>(), 1.0, "exactly one chosen");
}

#[test]
fn select_with_a_lambda_grid_sweeps_the_objective_curves() {
    let out = credence(&["select", "--lambda", "0.1:100:25:log"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 25);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(
        header,
        "lambda,total_a,total_b,difference,chosen,posterior_q0"
    );
}

#[test]
fn threshold_reports_none_when_no_flip_exists() {
    let out = credence(&[
        "threshold",
        "--prior",
        "0.7,0.3",
        "--menu",
        "A=0.8,0.2;B=0.2,0.8",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let rows = data_rows(&stdout(&out));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "0.00000000000e0");
    assert_eq!(rows[0][1], "none");
}

#[test]
fn plotting_an_update_is_an_axis_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("plot.svg");
    let out = credence(&[
        "update",
        "--lik",
        "0.7,0.3",
        "--plot",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("axis mismatch"));
    assert!(!plot.exists());
}

#[test]
fn line_plot_with_three_swept_axes_is_an_axis_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("plot.svg");
    let out = credence(&[
        "sweep",
        "--lambda",
        "1,2",
        "--alpha",
        "1,2",
        "--plot",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("axis mismatch"), "{}", stderr(&out));
}

#[test]
fn numeric_solver_agrees_with_the_closed_form_through_the_cli() {
    let base = [
        "update", "--prior", "0.3,0.7", "--lik", "0.8,0.2", "--c", "2,0", "--alpha", "3",
        "--lambda", "0.7",
    ];
    let closed = credence(&base);
    let mut numeric_args = base.to_vec();
    numeric_args.extend(["--solver", "numeric"]);
    let numeric = credence(&numeric_args);
    assert_eq!(closed.status.code(), Some(0));
    assert_eq!(numeric.status.code(), Some(0), "stderr: {}", stderr(&numeric));
    let qc: f64 = data_rows(&stdout(&closed))[0][0].parse().unwrap();
    let qn: f64 = data_rows(&stdout(&numeric))[0][0].parse().unwrap();
    assert!((qc - qn).abs() < 1e-8, "closed {qc} vs numeric {qn}");
}

#[test]
fn limit_solver_requires_lambda_zero_and_matches_the_drive_argmax() {
    let bad = credence(&["update", "--lik", "0.7,0.3", "--solver", "limit"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("lambda"));

    let good = credence(&[
        "update", "--lik", "0.7,0.3", "--c", "0,1", "--lambda", "0", "--solver", "limit",
    ]);
    assert_eq!(good.status.code(), Some(0), "stderr: {}", stderr(&good));
    // Drive: state 0 scores ln 0.7, state 1 scores 1 + ln 0.3; the payoff
    // wins, so all mass lands on state 1.
    let rows = data_rows(&stdout(&good));
    let q1: f64 = rows[0][1].parse().unwrap();
    assert_eq!(q1, 1.0);
}

#[test]
fn heatmap_scenario_writes_a_two_panel_svg_or_a_boundary_overlay() {
    let dir = tempfile::tempdir().unwrap();
    let landscape = dir.path().join("landscape.svg");
    let out = credence(&[
        "heatmap",
        "--evidence",
        "0.3",
        "--lambda",
        "1:10:11",
        "--alpha",
        "1:10:11",
        "--plot",
        landscape.to_str().unwrap(),
        "--out",
        dir.path().join("landscape.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let svg = std::fs::read_to_string(&landscape).unwrap();
    assert_eq!(svg.matches("class=\"heatmap-panel\"").count(), 2);

    let boundary = dir.path().join("boundary.svg");
    let out = credence(&[
        "heatmap",
        "--menu",
        "A=0.95,0.05;B=0.4,0.6",
        "--lambda",
        "0.1:100:11:log",
        "--alpha",
        "1:10:11",
        "--plot",
        boundary.to_str().unwrap(),
        "--out",
        dir.path().join("boundary.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let svg = std::fs::read_to_string(&boundary).unwrap();
    assert_eq!(svg.matches("class=\"heatmap-panel\"").count(), 1);
    assert_eq!(svg.matches("class=\"boundary\"").count(), 1);
}

#[test]
fn unknown_reproduce_bundle_exits_one() {
    let out = credence(&["reproduce", "fig99"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("fig99"));
}

/// Guard for the helper the other assertions lean on.
#[test]
fn data_rows_skips_metadata_and_header() {
    let rows = data_rows("# a = 1\nx,y\n1,2\n3,4\n");
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0], vec!["1", "2"]);
}

#[cfg(unix)]
#[test]
fn unwritable_output_path_is_a_runtime_error() {
    let out = credence(&[
        "update",
        "--lik",
        "0.7,0.3",
        "--out",
        "/proc/does-not-exist/run.csv",
    ]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
}
