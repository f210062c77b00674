//! SVG rendering of sweep results: line charts over one swept axis (with an
//! optional series axis) and heatmaps over exactly two swept axes, with a
//! decision-boundary overlay for two-option selection grids.
//!
//! The renderer is self-contained — plain SVG text, fixed float formatting,
//! no external assets — so identical input yields a byte-identical file.
//! Structural elements carry stable `class` attributes (`series`,
//! `reference`, `heatmap-panel`, `boundary`, `axis-label`, `legend`) so
//! tests and downstream tooling can inspect a plot without rasterizing it.

use std::fmt::Write as _;

use credence::{AxisScale, SweepKind, SweepResult};

use crate::CliError;

/// What shape of plot to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// One swept axis on x (plus an optional series axis drawn as one
    /// polyline per series value).
    Line,
    /// Two swept axes; each cell becomes a colored rectangle.
    Heatmap,
}

impl PlotKind {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        match text {
            "line" => Ok(PlotKind::Line),
            "heatmap" => Ok(PlotKind::Heatmap),
            other => Err(CliError::validation(
                "plot",
                format!("unknown plot kind `{other}` (expected line or heatmap)"),
            )),
        }
    }
}

const WIDTH: f64 = 780.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 56.0;

/// Distinguishable series colors, cycled when there are more series.
const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

fn fmt_coord(x: f64) -> String {
    format!("{x:.2}")
}

/// Short human-readable tick label.
fn fmt_tick(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.abs() >= 0.01 && x.abs() < 10000.0 {
        let s = format!("{x:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        if s.is_empty() {
            "0".to_string()
        } else {
            s
        }
    } else {
        format!("{x:.1e}")
    }
}

/// Maps a data value to [0, 1] along an axis, honoring log scaling.
struct AxisMap {
    lo: f64,
    hi: f64,
    log: bool,
}

impl AxisMap {
    fn from_values(values: &[f64], scale: AxisScale) -> Self {
        let log = scale == AxisScale::Log10 && values.iter().all(|&v| v > 0.0);
        let transformed: Vec<f64> = values
            .iter()
            .filter(|v| v.is_finite())
            .map(|&v| if log { v.log10() } else { v })
            .collect();
        let lo = transformed.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = transformed
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = if lo.is_finite() && hi.is_finite() {
            if lo == hi {
                (lo - 0.5, hi + 0.5)
            } else {
                (lo, hi)
            }
        } else {
            (0.0, 1.0)
        };
        AxisMap { lo, hi, log }
    }

    fn unit(&self, value: f64) -> Option<f64> {
        if !value.is_finite() || (self.log && value <= 0.0) {
            return None;
        }
        let v = if self.log { value.log10() } else { value };
        Some((v - self.lo) / (self.hi - self.lo))
    }

    /// Representative tick positions in data space.
    fn ticks(&self, count: usize) -> Vec<f64> {
        (0..count)
            .map(|i| {
                let t = i as f64 / (count - 1) as f64;
                let v = self.lo + t * (self.hi - self.lo);
                if self.log {
                    10f64.powf(v)
                } else {
                    v
                }
            })
            .collect()
    }
}

/// The value columns a line plot draws for each sweep kind, and whether a
/// Bayes reference curve accompanies them.
fn line_columns(kind: SweepKind) -> (&'static [&'static str], Option<&'static str>, &'static str) {
    match kind {
        SweepKind::EvidenceStrength => (&["posterior_q0"], Some("bayes_q0"), "posterior q(0)"),
        SweepKind::SelectionCurve => (&["total_a", "total_b"], None, "objective total"),
        SweepKind::Polarization => (&["gap"], None, "belief gap"),
        SweepKind::ObjectiveLandscape => (&["total"], None, "objective total"),
        SweepKind::SelectionBoundary => (&["difference"], None, "total_a - total_b"),
    }
}

/// The panels a heatmap draws: (column, panel title) pairs.
fn heatmap_panels(kind: SweepKind) -> Vec<(&'static str, &'static str)> {
    match kind {
        SweepKind::ObjectiveLandscape => vec![
            ("total", "objective total"),
            ("posterior_q0", "posterior q(0)"),
        ],
        SweepKind::SelectionBoundary => vec![("difference", "total_a - total_b")],
        SweepKind::EvidenceStrength => vec![("posterior_q0", "posterior q(0)")],
        SweepKind::SelectionCurve => vec![("difference", "total_a - total_b")],
        SweepKind::Polarization => vec![("gap", "belief gap")],
    }
}

/// Renders a sweep as an SVG document.
pub fn render(sweep: &SweepResult, kind: PlotKind) -> Result<String, CliError> {
    if sweep.n_cells() == 0 || sweep.rows.is_empty() {
        return Err(CliError::AxisMismatch(
            "cannot plot an empty sweep".to_string(),
        ));
    }
    let swept: Vec<usize> = (0..sweep.axes.len())
        .filter(|&i| sweep.axes[i].len() > 1)
        .collect();
    match kind {
        PlotKind::Line => match swept.len() {
            1 => render_line(sweep, None, swept[0]),
            2 => render_line(sweep, Some(swept[0]), swept[1]),
            n => Err(CliError::AxisMismatch(format!(
                "a line plot needs 1 swept axis plus at most 1 series axis, got {n} swept axes"
            ))),
        },
        PlotKind::Heatmap => {
            if swept.len() != 2 {
                return Err(CliError::AxisMismatch(format!(
                    "a heatmap needs exactly 2 swept axes, got {}",
                    swept.len()
                )));
            }
            render_heatmap(sweep, swept[0], swept[1])
        }
    }
}

/// Iterates the row indices of one series: all cells where the non-plotted
/// axes sit at fixed positions, in x-axis order.
fn series_rows(
    sweep: &SweepResult,
    x_axis: usize,
    series_axis: Option<usize>,
    series_pos: usize,
) -> Vec<usize> {
    let lens: Vec<usize> = sweep.axes.iter().map(|a| a.len()).collect();
    let strides = row_major_strides(&lens);
    let mut base = 0;
    if let Some(s) = series_axis {
        base += series_pos * strides[s];
    }
    (0..lens[x_axis]).map(|i| base + i * strides[x_axis]).collect()
}

fn row_major_strides(lens: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; lens.len()];
    for k in (0..lens.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * lens[k + 1];
    }
    strides
}

fn svg_header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text class=\"title\" x=\"{x}\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">{title}</text>\n",
        x = WIDTH / 2.0,
    )
}

fn axis_labels(out: &mut String, x_label: &str, y_label: &str) {
    let _ = writeln!(
        out,
        "<text class=\"axis-label\" x=\"{x}\" y=\"{y}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{x_label}</text>",
        x = MARGIN_LEFT + (WIDTH - MARGIN_LEFT - MARGIN_RIGHT) / 2.0,
        y = HEIGHT - 12.0,
    );
    let _ = writeln!(
        out,
        "<text class=\"axis-label\" x=\"18\" y=\"{y}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 {y})\">{y_label}</text>",
        y = MARGIN_TOP + (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM) / 2.0,
    );
}

fn x_ticks(out: &mut String, map: &AxisMap, plot_w: f64, x0: f64, y_base: f64) {
    for tick in map.ticks(5) {
        if let Some(u) = map.unit(tick) {
            let x = x0 + u * plot_w;
            let _ = write!(
                out,
                "<line x1=\"{x}\" y1=\"{y1}\" x2=\"{x}\" y2=\"{y2}\" stroke=\"#999\"/>\n\
                 <text x=\"{x}\" y=\"{yt}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{label}</text>\n",
                x = fmt_coord(x),
                y1 = fmt_coord(y_base),
                y2 = fmt_coord(y_base + 4.0),
                yt = fmt_coord(y_base + 17.0),
                label = fmt_tick(tick),
            );
        }
    }
}

fn y_ticks(out: &mut String, map: &AxisMap, plot_h: f64, x_base: f64, y0: f64) {
    for tick in map.ticks(5) {
        if let Some(u) = map.unit(tick) {
            let y = y0 + plot_h - u * plot_h;
            let _ = write!(
                out,
                "<line x1=\"{x1}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\" stroke=\"#999\"/>\n\
                 <text x=\"{xt}\" y=\"{yt}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{label}</text>\n",
                x1 = fmt_coord(x_base - 4.0),
                x2 = fmt_coord(x_base),
                y = fmt_coord(y),
                xt = fmt_coord(x_base - 7.0),
                yt = fmt_coord(y + 4.0),
                label = fmt_tick(tick),
            );
        }
    }
}

fn render_line(
    sweep: &SweepResult,
    series_axis: Option<usize>,
    x_axis: usize,
) -> Result<String, CliError> {
    let (value_cols, reference_col, y_label) = line_columns(sweep.kind);
    let col_indices: Vec<usize> = value_cols
        .iter()
        .map(|name| {
            sweep.column_index(name).ok_or_else(|| {
                CliError::AxisMismatch(format!("sweep has no `{name}` column to plot"))
            })
        })
        .collect::<Result<_, _>>()?;
    let reference_idx = reference_col.and_then(|name| sweep.column_index(name));

    let axis = &sweep.axes[x_axis];
    let x_map = AxisMap::from_values(&axis.values, axis.scale);

    // Global y range across every drawn curve.
    let mut y_values: Vec<f64> = Vec::new();
    let n_series = series_axis.map_or(1, |s| sweep.axes[s].len());
    for series in 0..n_series {
        for &row in &series_rows(sweep, x_axis, series_axis, series) {
            for &c in &col_indices {
                y_values.push(sweep.rows[row][c]);
            }
            if let Some(r) = reference_idx {
                y_values.push(sweep.rows[row][r]);
            }
        }
    }
    let y_map = AxisMap::from_values(&y_values, AxisScale::Linear);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let title = format!("{} by {}", y_label, axis.name);
    let mut out = svg_header(&title);
    let _ = writeln!(
        out,
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"#333\"/>"
    );
    x_ticks(&mut out, &x_map, plot_w, MARGIN_LEFT, MARGIN_TOP + plot_h);
    y_ticks(&mut out, &y_map, plot_h, MARGIN_LEFT, MARGIN_TOP);
    axis_labels(&mut out, &axis.name, y_label);

    let point = |xv: f64, yv: f64| -> Option<(f64, f64)> {
        let ux = x_map.unit(xv)?;
        let uy = y_map.unit(yv)?;
        Some((
            MARGIN_LEFT + ux * plot_w,
            MARGIN_TOP + plot_h - uy * plot_h,
        ))
    };

    // Reference curve (drawn once, from the first series — it does not vary
    // with the series axis for any sweep kind that has one).
    if let Some(r) = reference_idx {
        let mut path = String::new();
        for (i, &row) in series_rows(sweep, x_axis, series_axis, 0).iter().enumerate() {
            if let Some((x, y)) = point(axis.values[i], sweep.rows[row][r]) {
                let _ = write!(path, "{},{} ", fmt_coord(x), fmt_coord(y));
            }
        }
        if !path.is_empty() {
            let _ = writeln!(
                out,
                "<polyline class=\"reference\" points=\"{}\" fill=\"none\" stroke=\"#555\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>",
                path.trim_end(),
            );
        }
    }

    // One polyline per (series value, value column).
    let mut color = 0usize;
    let mut legend: Vec<(String, &'static str)> = Vec::new();
    for series in 0..n_series {
        let rows = series_rows(sweep, x_axis, series_axis, series);
        for (k, &c) in col_indices.iter().enumerate() {
            let stroke = PALETTE[color % PALETTE.len()];
            color += 1;
            let mut path = String::new();
            for (i, &row) in rows.iter().enumerate() {
                if let Some((x, y)) = point(axis.values[i], sweep.rows[row][c]) {
                    let _ = write!(path, "{},{} ", fmt_coord(x), fmt_coord(y));
                }
            }
            if !path.is_empty() {
                let _ = writeln!(
                    out,
                    "<polyline class=\"series\" points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.8\"/>",
                    path.trim_end(),
                );
            }
            let name = match series_axis {
                Some(s) => {
                    let v = fmt_tick(sweep.axes[s].values[series]);
                    if col_indices.len() > 1 {
                        format!("{} = {v}, {}", sweep.axes[s].name, value_cols[k])
                    } else {
                        format!("{} = {v}", sweep.axes[s].name)
                    }
                }
                None => value_cols[k].to_string(),
            };
            legend.push((name, stroke));
        }
    }
    if reference_idx.is_some() {
        legend.push(("no-payoff reference".to_string(), "#555"));
    }

    // Legend block in the top-right corner of the plot area.
    let legend_x = MARGIN_LEFT + plot_w - 170.0;
    let mut legend_y = MARGIN_TOP + 14.0;
    let _ = writeln!(out, "<g class=\"legend\">");
    for (name, stroke) in legend.iter().take(12) {
        let _ = write!(
            out,
            "<line x1=\"{x1}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\" stroke=\"{stroke}\" stroke-width=\"2\"/>\n\
             <text x=\"{xt}\" y=\"{yt}\" font-family=\"sans-serif\" font-size=\"11\">{name}</text>\n",
            x1 = fmt_coord(legend_x),
            x2 = fmt_coord(legend_x + 22.0),
            y = fmt_coord(legend_y),
            xt = fmt_coord(legend_x + 28.0),
            yt = fmt_coord(legend_y + 4.0),
        );
        legend_y += 16.0;
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

/// Sequential color ramp for heatmap cells: piecewise-linear through dark
/// blue, teal, green, yellow over [0, 1].
fn heat_color(unit: f64) -> String {
    let stops: [(f64, (u8, u8, u8)); 4] = [
        (0.0, (68, 1, 84)),
        (0.33, (49, 104, 142)),
        (0.66, (53, 183, 121)),
        (1.0, (253, 231, 37)),
    ];
    let u = unit.clamp(0.0, 1.0);
    let mut rgb = stops[0].1;
    for pair in stops.windows(2) {
        let (t0, c0) = pair[0];
        let (t1, c1) = pair[1];
        if u >= t0 && u <= t1 {
            let f = if t1 > t0 { (u - t0) / (t1 - t0) } else { 0.0 };
            rgb = (
                (c0.0 as f64 + f * (c1.0 as f64 - c0.0 as f64)).round() as u8,
                (c0.1 as f64 + f * (c1.1 as f64 - c0.1 as f64)).round() as u8,
                (c0.2 as f64 + f * (c1.2 as f64 - c0.2 as f64)).round() as u8,
            );
            break;
        }
    }
    format!("#{:02x}{:02x}{:02x}", rgb.0, rgb.1, rgb.2)
}

fn render_heatmap(
    sweep: &SweepResult,
    outer_axis: usize,
    inner_axis: usize,
) -> Result<String, CliError> {
    let panels = heatmap_panels(sweep.kind);
    let panel_indices: Vec<(usize, &str)> = panels
        .iter()
        .map(|(name, title)| {
            sweep
                .column_index(name)
                .map(|i| (i, *title))
                .ok_or_else(|| {
                    CliError::AxisMismatch(format!("sweep has no `{name}` column to plot"))
                })
        })
        .collect::<Result<_, _>>()?;

    // Outer axis on y, inner axis on x: the inner axis varies fastest in
    // row-major order, which makes each outer position one raster row.
    let outer = &sweep.axes[outer_axis];
    let inner = &sweep.axes[inner_axis];
    let lens: Vec<usize> = sweep.axes.iter().map(|a| a.len()).collect();
    let strides = row_major_strides(&lens);

    let n_panels = panel_indices.len();
    let panel_gap = 48.0;
    let panel_w =
        (WIDTH - MARGIN_LEFT - MARGIN_RIGHT - panel_gap * (n_panels as f64 - 1.0)) / n_panels as f64;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

    let x_map = AxisMap::from_values(&inner.values, inner.scale);
    let y_map = AxisMap::from_values(&outer.values, outer.scale);

    let title = format!(
        "{} over ({}, {})",
        panel_indices
            .iter()
            .map(|(_, t)| *t)
            .collect::<Vec<_>>()
            .join(" and "),
        inner.name,
        outer.name
    );
    let mut out = svg_header(&title);

    for (p, &(col, panel_title)) in panel_indices.iter().enumerate() {
        let x0 = MARGIN_LEFT + p as f64 * (panel_w + panel_gap);
        // Panel value range.
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for row in &sweep.rows {
            let v = row[col];
            if v.is_finite() {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(CliError::AxisMismatch(format!(
                "column `{}` has no finite values to plot",
                sweep.columns[col]
            )));
        }
        if lo == hi {
            lo -= 0.5;
            hi += 0.5;
        }

        let _ = write!(
            out,
            "<g class=\"heatmap-panel\">\n<text x=\"{xt}\" y=\"{yt}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{panel_title}</text>\n",
            xt = fmt_coord(x0 + panel_w / 2.0),
            yt = fmt_coord(MARGIN_TOP - 6.0),
        );

        // Cell rectangles. Edges sit midway between neighboring grid
        // positions in mapped (possibly log) space.
        let xs: Vec<f64> = inner
            .values
            .iter()
            .map(|&v| x_map.unit(v).unwrap_or(0.0))
            .collect();
        let ys: Vec<f64> = outer
            .values
            .iter()
            .map(|&v| y_map.unit(v).unwrap_or(0.0))
            .collect();
        let edges = |units: &[f64]| -> Vec<(f64, f64)> {
            let n = units.len();
            (0..n)
                .map(|i| {
                    let left = if i == 0 {
                        units[0]
                    } else {
                        0.5 * (units[i - 1] + units[i])
                    };
                    let right = if i + 1 == n {
                        units[n - 1]
                    } else {
                        0.5 * (units[i] + units[i + 1])
                    };
                    (left, right)
                })
                .collect()
        };
        let x_edges = edges(&xs);
        let y_edges = edges(&ys);

        for (oi, &(y_lo, y_hi)) in y_edges.iter().enumerate() {
            for (ii, &(x_lo, x_hi)) in x_edges.iter().enumerate() {
                let row = oi * strides[outer_axis] + ii * strides[inner_axis];
                let v = sweep.rows[row][col];
                let fill = if v.is_finite() {
                    heat_color((v - lo) / (hi - lo))
                } else {
                    "#cccccc".to_string()
                };
                let rx = x0 + x_lo * panel_w;
                let rw = (x_hi - x_lo) * panel_w;
                let ry = MARGIN_TOP + plot_h - y_hi * plot_h;
                let rh = (y_hi - y_lo) * plot_h;
                let _ = writeln!(
                    out,
                    "<rect x=\"{x}\" y=\"{y}\" width=\"{w}\" height=\"{h}\" fill=\"{fill}\"/>",
                    x = fmt_coord(rx),
                    y = fmt_coord(ry),
                    w = fmt_coord(rw.max(0.1)),
                    h = fmt_coord(rh.max(0.1)),
                );
            }
        }

        // Decision boundary overlay: for each outer row, linearly
        // interpolate where the `difference` column crosses zero.
        if sweep.kind == SweepKind::SelectionBoundary
            && sweep.columns[col] == "difference"
        {
            let mut path = String::new();
            for (oi, &yu) in ys.iter().enumerate() {
                let mut crossing: Option<f64> = None;
                for ii in 1..inner.len() {
                    let r0 = oi * strides[outer_axis] + (ii - 1) * strides[inner_axis];
                    let r1 = oi * strides[outer_axis] + ii * strides[inner_axis];
                    let d0 = sweep.rows[r0][col];
                    let d1 = sweep.rows[r1][col];
                    if d0.is_finite() && d1.is_finite() && (d0 > 0.0) != (d1 > 0.0) {
                        let f = if d1 != d0 { d0 / (d0 - d1) } else { 0.5 };
                        crossing = Some(xs[ii - 1] + f * (xs[ii] - xs[ii - 1]));
                        break;
                    }
                }
                if let Some(xu) = crossing {
                    let _ = write!(
                        path,
                        "{},{} ",
                        fmt_coord(x0 + xu * panel_w),
                        fmt_coord(MARGIN_TOP + plot_h - yu * plot_h),
                    );
                }
            }
            if !path.is_empty() {
                let _ = writeln!(
                    out,
                    "<polyline class=\"boundary\" points=\"{}\" fill=\"none\" stroke=\"white\" stroke-width=\"2.5\"/>",
                    path.trim_end(),
                );
            }
        }

        // Frame + ticks per panel.
        let _ = writeln!(
            out,
            "<rect x=\"{x0c}\" y=\"{MARGIN_TOP}\" width=\"{w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"#333\"/>",
            x0c = fmt_coord(x0),
            w = fmt_coord(panel_w),
        );
        x_ticks(&mut out, &x_map, panel_w, x0, MARGIN_TOP + plot_h);
        if p == 0 {
            y_ticks(&mut out, &y_map, plot_h, x0, MARGIN_TOP);
        }
        let _ = write!(
            out,
            "<text class=\"axis-label\" x=\"{xt}\" y=\"{yt}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{name}</text>\n</g>\n",
            xt = fmt_coord(x0 + panel_w / 2.0),
            yt = HEIGHT - 12.0,
            name = inner.name,
        );
    }
    let _ = writeln!(
        out,
        "<text class=\"axis-label\" x=\"18\" y=\"{y}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 {y})\">{name}</text>",
        y = MARGIN_TOP + plot_h / 2.0,
        name = outer.name,
    );
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use credence::{Axis, AxisScale};

    fn tiny_sweep(kind: SweepKind, axes: Vec<Axis>, columns: &[&str]) -> SweepResult {
        let n: usize = axes.iter().map(|a| a.len()).product();
        SweepResult {
            kind,
            axes,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: (0..n)
                .map(|i| (0..columns.len()).map(|c| (i + c) as f64 * 0.01).collect())
                .collect(),
        }
    }

    #[test]
    fn line_plot_needs_exactly_one_swept_axis() {
        let sweep = tiny_sweep(
            SweepKind::EvidenceStrength,
            vec![
                Axis::linear("lambda", vec![1.0, 2.0]),
                Axis::linear("alpha", vec![1.0, 2.0]),
                Axis::linear("evidence", vec![0.2, 0.5, 0.8]),
            ],
            &["posterior_q0", "bayes_q0"],
        );
        let err = render(&sweep, PlotKind::Line).unwrap_err();
        assert!(matches!(err, CliError::AxisMismatch(_)));
    }

    #[test]
    fn heatmap_needs_exactly_two_swept_axes() {
        let sweep = tiny_sweep(
            SweepKind::Polarization,
            vec![
                Axis::linear("lambda", vec![1.0, 2.0, 3.0]),
                Axis::linear("alpha", vec![1.0]),
            ],
            &["agent1_q0", "agent2_q0", "bayes_q0", "gap"],
        );
        let err = render(&sweep, PlotKind::Heatmap).unwrap_err();
        assert!(matches!(err, CliError::AxisMismatch(_)));
    }

    #[test]
    fn empty_sweep_is_an_axis_mismatch() {
        let sweep = SweepResult {
            kind: SweepKind::Polarization,
            axes: vec![Axis::linear("lambda", vec![])],
            columns: vec!["gap".to_string()],
            rows: vec![],
        };
        let err = render(&sweep, PlotKind::Line).unwrap_err();
        assert!(matches!(err, CliError::AxisMismatch(_)));
    }

    #[test]
    fn series_axis_draws_one_polyline_per_value_plus_reference() {
        let sweep = tiny_sweep(
            SweepKind::EvidenceStrength,
            vec![
                Axis::linear("lambda", vec![1.0, 2.0, 3.0]),
                Axis::linear("alpha", vec![1.0]),
                Axis::linear("evidence", vec![0.2, 0.5, 0.8]),
            ],
            &["posterior_q0", "bayes_q0", "utility", "accuracy", "complexity", "total"],
        );
        let svg = render(&sweep, PlotKind::Line).unwrap();
        assert_eq!(svg.matches("class=\"series\"").count(), 3);
        assert_eq!(svg.matches("class=\"reference\"").count(), 1);
        assert!(svg.contains("class=\"legend\""));
        assert!(svg.contains("class=\"axis-label\""));
    }

    #[test]
    fn boundary_heatmap_overlays_a_polyline() {
        let lambdas = vec![1.0, 2.0, 3.0, 4.0];
        let alphas = vec![1.0, 2.0, 3.0];
        let mut rows = Vec::new();
        for (i, _l) in lambdas.iter().enumerate() {
            for (j, _a) in alphas.iter().enumerate() {
                // Sign of `difference` flips between the alpha grid's
                // second and third columns on every lambda row.
                let d = if j < 2 { 1.0 } else { -1.0 } * (1.0 + i as f64);
                rows.push(vec![d.max(0.0), (-d).max(0.0), d, f64::from(u8::from(d < 0.0)), 0.5]);
            }
        }
        let sweep = SweepResult {
            kind: SweepKind::SelectionBoundary,
            axes: vec![
                Axis {
                    name: "lambda".to_string(),
                    values: lambdas,
                    scale: AxisScale::Log10,
                },
                Axis::linear("alpha", alphas),
            ],
            columns: ["total_a", "total_b", "difference", "chosen", "posterior_q0"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            rows,
        };
        let svg = render(&sweep, PlotKind::Heatmap).unwrap();
        assert_eq!(svg.matches("class=\"boundary\"").count(), 1);
        assert_eq!(svg.matches("class=\"heatmap-panel\"").count(), 1);
    }

    #[test]
    fn landscape_heatmap_has_two_panels() {
        let sweep = tiny_sweep(
            SweepKind::ObjectiveLandscape,
            vec![
                Axis::linear("lambda", vec![1.0, 2.0]),
                Axis::linear("alpha", vec![1.0, 2.0]),
            ],
            &["posterior_q0", "bayes_q0", "utility", "accuracy", "complexity", "total"],
        );
        let svg = render(&sweep, PlotKind::Heatmap).unwrap();
        assert_eq!(svg.matches("class=\"heatmap-panel\"").count(), 2);
    }

    #[test]
    fn rendering_is_deterministic() {
        let sweep = tiny_sweep(
            SweepKind::Polarization,
            vec![
                Axis::linear("lambda", vec![0.5, 1.0, 2.0]),
                Axis::linear("alpha", vec![1.0]),
            ],
            &["agent1_q0", "agent2_q0", "bayes_q0", "gap"],
        );
        assert_eq!(
            render(&sweep, PlotKind::Line).unwrap(),
            render(&sweep, PlotKind::Line).unwrap()
        );
    }
}
