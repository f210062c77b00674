//! Tabular results: one rectangular table of real/text cells plus the
//! metadata echo of the configuration that produced it, serializable to
//! CSV (metadata as leading `#` comments) or JSON (records + metadata).
//!
//! Real cells render with 12 significant digits everywhere, and both
//! serializers are deterministic: the same table yields byte-identical
//! output on every run.

use std::fmt::Write as _;

use credence::{SelectionOutcome, SweepResult, UpdateResult};

use crate::config::RunConfig;
use crate::CliError;

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Text(String),
}

/// A rectangular result table with its configuration echo.
#[derive(Debug, Clone)]
pub struct OutputTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: Vec<(String, String)>,
}

/// 12 significant digits: one leading digit plus 11 decimals in
/// scientific notation.
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.11e}")
    }
}

fn push_json_string(out: &mut String, text: &str) {
    out.push('"');
    for ch in text.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

impl OutputTable {
    pub fn new(columns: Vec<String>, metadata: Vec<(String, String)>) -> Self {
        OutputTable {
            columns,
            rows: Vec::new(),
            metadata,
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "ragged table row");
        self.rows.push(row);
    }

    /// CSV: `# key = value` metadata lines, a header row, then data rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.metadata {
            let _ = writeln!(out, "# {key} = {value}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let mut first = true;
            for cell in row {
                if !first {
                    out.push(',');
                }
                first = false;
                match cell {
                    Cell::Real(x) => out.push_str(&fmt_real(*x)),
                    Cell::Text(t) => out.push_str(t),
                }
            }
            out.push('\n');
        }
        out
    }

    /// JSON: `{"metadata": {...}, "records": [{col: val, ...}, ...]}` with
    /// keys in insertion order and reals carrying full precision
    /// (non-finite values become null, JSON having no spelling for them).
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n  \"metadata\": {");
        for (i, (key, value)) in self.metadata.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("\n    ");
            push_json_string(&mut out, key);
            out.push_str(": ");
            push_json_string(&mut out, value);
        }
        out.push_str("\n  },\n  \"records\": [");
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("\n    {");
            for (j, (col, cell)) in self.columns.iter().zip(row).enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                push_json_string(&mut out, col);
                out.push_str(": ");
                match cell {
                    Cell::Real(x) if x.is_finite() => {
                        let _ = write!(out, "{x:?}");
                    }
                    Cell::Real(_) => out.push_str("null"),
                    Cell::Text(t) => push_json_string(&mut out, t),
                }
            }
            out.push('}');
        }
        out.push_str("\n  ]\n}\n");
        out
    }
}

/// Single-update table: posterior components, then the objective pieces.
pub fn from_update(config: &RunConfig, result: &UpdateResult) -> OutputTable {
    let n = result.posterior.n_states();
    let mut columns: Vec<String> = (0..n).map(|s| format!("q{s}")).collect();
    columns.extend(
        ["utility", "accuracy", "complexity", "total"]
            .iter()
            .map(|s| s.to_string()),
    );
    let mut table = OutputTable::new(columns, config.echo());
    let mut row: Vec<Cell> = result
        .posterior
        .probs()
        .iter()
        .map(|&q| Cell::Real(q))
        .collect();
    row.push(Cell::Real(result.breakdown.affective_utility));
    row.push(Cell::Real(result.breakdown.accuracy));
    row.push(Cell::Real(result.breakdown.complexity));
    row.push(Cell::Real(result.breakdown.total));
    table.push_row(row);
    table
}

/// Grid-sweep table: one row per cell, axis coordinates first, then the
/// sweep's value columns.
pub fn from_sweep(config: &RunConfig, sweep: &SweepResult) -> OutputTable {
    let mut columns: Vec<String> = sweep.axes.iter().map(|a| a.name.clone()).collect();
    columns.extend(sweep.columns.iter().cloned());
    let mut table = OutputTable::new(columns, config.echo());
    for (i, values) in sweep.rows.iter().enumerate() {
        let mut row: Vec<Cell> = sweep.coords(i).into_iter().map(Cell::Real).collect();
        row.extend(values.iter().map(|&v| Cell::Real(v)));
        table.push_row(row);
    }
    table
}

/// Selection-at-one-λ table: one row per menu option.
pub fn from_selection(config: &RunConfig, outcome: &SelectionOutcome) -> OutputTable {
    let columns = vec![
        "option".to_string(),
        "total".to_string(),
        "posterior_q0".to_string(),
        "chosen".to_string(),
    ];
    let mut table = OutputTable::new(columns, config.echo());
    for (i, option) in outcome.per_option.iter().enumerate() {
        table.push_row(vec![
            Cell::Text(option.label.clone()),
            Cell::Real(option.total),
            Cell::Real(option.result.posterior.prob(0)),
            Cell::Real(if i == outcome.chosen_index { 1.0 } else { 0.0 }),
        ]);
    }
    table
}

/// Threshold-search table: a single row saying whether the preference
/// flipped inside the range and, if so, where.
pub fn from_threshold(config: &RunConfig, threshold: Option<f64>) -> OutputTable {
    let columns = vec!["found".to_string(), "threshold".to_string()];
    let mut table = OutputTable::new(columns, config.echo());
    match threshold {
        Some(value) => table.push_row(vec![Cell::Real(1.0), Cell::Real(value)]),
        None => table.push_row(vec![Cell::Real(0.0), Cell::Text("none".to_string())]),
    }
    table
}

/// Parses a CSV document produced by [`OutputTable::to_csv`] back into
/// metadata, header, and rows — used by tests and by tooling that re-runs
/// result files.
pub fn parse_csv(text: &str) -> Result<OutputTable, CliError> {
    let mut metadata = Vec::new();
    let mut lines = text.lines().peekable();
    while let Some(line) = lines.peek() {
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            match rest.split_once('=') {
                Some((key, value)) => {
                    metadata.push((key.trim().to_string(), value.trim().to_string()))
                }
                None => {
                    return Err(CliError::Parse(format!(
                        "metadata line without `=`: `{line}`"
                    )))
                }
            }
            lines.next();
        } else {
            break;
        }
    }
    let header = lines
        .next()
        .ok_or_else(|| CliError::Parse("CSV has no header row".to_string()))?;
    let columns: Vec<String> = header.split(',').map(|s| s.to_string()).collect();
    let mut table = OutputTable::new(columns, metadata);
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<Cell> = line
            .split(',')
            .map(|field| match field {
                "nan" => Cell::Real(f64::NAN),
                "inf" => Cell::Real(f64::INFINITY),
                "-inf" => Cell::Real(f64::NEG_INFINITY),
                other => match other.parse::<f64>() {
                    Ok(x) => Cell::Real(x),
                    Err(_) => Cell::Text(other.to_string()),
                },
            })
            .collect();
        if cells.len() != table.columns.len() {
            return Err(CliError::Parse(format!(
                "row has {} fields, header has {}",
                cells.len(),
                table.columns.len()
            )));
        }
        table.push_row(cells);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_table() -> OutputTable {
        let mut table = OutputTable::new(
            vec!["x".to_string(), "y".to_string()],
            vec![("scenario".to_string(), "\"update\"".to_string())],
        );
        table.push_row(vec![Cell::Real(0.1), Cell::Real(2.0 / 3.0)]);
        table.push_row(vec![Cell::Real(-1.5e-12), Cell::Text("none".to_string())]);
        table
    }

    #[test]
    fn csv_has_comment_metadata_header_and_rows() {
        let csv = sample_table().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# scenario = \"update\"");
        assert_eq!(lines[1], "x,y");
        assert!(lines[2].starts_with("1.00000000000e-1,"));
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn reals_carry_twelve_significant_digits() {
        assert_eq!(fmt_real(2.0 / 3.0), "6.66666666667e-1");
        assert_eq!(fmt_real(1.0), "1.00000000000e0");
        assert_eq!(fmt_real(0.0), "0.00000000000e0");
        assert_eq!(fmt_real(f64::NAN), "nan");
        assert_eq!(fmt_real(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_round_trips_to_twelve_digits() {
        let table = sample_table();
        let parsed = parse_csv(&table.to_csv()).unwrap();
        assert_eq!(parsed.columns, table.columns);
        assert_eq!(parsed.metadata, table.metadata);
        for (orig, round) in table.rows.iter().flatten().zip(parsed.rows.iter().flatten()) {
            match (orig, round) {
                (Cell::Real(a), Cell::Real(b)) => {
                    let scale = a.abs().max(1e-300);
                    assert!(
                        ((a - b) / scale).abs() < 1e-11,
                        "round trip {a} -> {b}"
                    );
                }
                (a, b) => assert_eq!(a, b),
            }
        }
    }

    #[test]
    fn json_preserves_insertion_order_and_nests_metadata() {
        let json = sample_table().to_json();
        let meta_pos = json.find("\"metadata\"").unwrap();
        let records_pos = json.find("\"records\"").unwrap();
        assert!(meta_pos < records_pos);
        let x_pos = json.find("\"x\":").unwrap();
        let y_pos = json.find("\"y\":").unwrap();
        assert!(x_pos < y_pos);
        assert!(json.contains("\"scenario\": \"\\\"update\\\"\""));
    }

    #[test]
    fn serialization_is_deterministic() {
        let table = sample_table();
        assert_eq!(table.to_csv(), table.to_csv());
        assert_eq!(table.to_json(), table.to_json());
    }
}
