//! Static SVG plots: one polyline per (estimator, divergence) curve, dashed
//! theory curves where available, log-scaled loss axis.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;
use crate::runner::ResultRow;

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 180.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

/// Axis layout: log-log for sweeps over `n`, semilog (linear x) for sweeps
/// over `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axes {
    LogLog,
    SemiLog,
}

impl FromStr for Axes {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "loglog" => Ok(Axes::LogLog),
            "semilog" => Ok(Axes::SemiLog),
            _ => Err(CliError::config(format!("unknown axes `{s}`"))),
        }
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Render rows of a single experiment as a self-contained SVG document.
///
/// The x variable is `n` when it varies across rows and `k` otherwise. Rows
/// with nonpositive or non-finite losses are skipped (the loss axis is
/// logarithmic); theory curves are drawn dashed and only where present.
pub fn render_svg(rows: &[ResultRow], axes: Axes) -> Result<String, CliError> {
    if rows.is_empty() {
        return Err(CliError::runtime("no rows to plot"));
    }
    let experiment = &rows[0].experiment;
    if rows.iter().any(|r| &r.experiment != experiment) {
        return Err(CliError::runtime("refusing to plot rows from mixed experiments"));
    }

    let n_varies = rows.iter().any(|r| r.n != rows[0].n);
    let (x_label, x_of) = if n_varies {
        ("n", (|r: &ResultRow| r.n as f64) as fn(&ResultRow) -> f64)
    } else {
        ("k", (|r: &ResultRow| r.k as f64) as fn(&ResultRow) -> f64)
    };

    // curve label -> sorted (x, loss) and (x, theory) points
    let mut curves: BTreeMap<String, (Vec<(f64, f64)>, Vec<(f64, f64)>)> = BTreeMap::new();
    for row in rows {
        let entry = curves
            .entry(format!("{} / {}", row.estimator, row.divergence))
            .or_default();
        if row.mean_loss.is_finite() && row.mean_loss > 0.0 {
            entry.0.push((x_of(row), row.mean_loss));
        }
        if let Some(theory) = row.theory_value {
            if theory.is_finite() && theory > 0.0 {
                entry.1.push((x_of(row), theory));
            }
        }
    }
    for (points, theory) in curves.values_mut() {
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        theory.sort_by(|a, b| a.0.total_cmp(&b.0));
    }

    let all_points = || {
        curves
            .values()
            .flat_map(|(p, t)| p.iter().chain(t.iter()))
            .copied()
    };
    if all_points().next().is_none() {
        return Err(CliError::runtime("no positive finite losses to plot"));
    }
    let x_raw = |x: f64| if axes == Axes::LogLog { x.log10() } else { x };
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in all_points() {
        x_min = x_min.min(x_raw(x));
        x_max = x_max.max(x_raw(x));
        y_min = y_min.min(y.log10());
        y_max = y_max.max(y.log10());
    }
    if x_max == x_min {
        x_max += 1.0;
        x_min -= 1.0;
    }
    if y_max == y_min {
        y_max += 1.0;
        y_min -= 1.0;
    }

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x_raw(x) - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| MARGIN_TOP + (y_max - y.log10()) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="18" font-family="sans-serif" font-size="14">{}</text>"#,
        MARGIN_LEFT,
        escape(experiment)
    )
    .unwrap();

    // Axes frame.
    writeln!(
        svg,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    )
    .unwrap();

    // y ticks at decades.
    for exp in (y_min.floor() as i64)..=(y_max.ceil() as i64) {
        let value = 10f64.powi(exp as i32);
        let y = sy(value);
        if !(MARGIN_TOP..=MARGIN_TOP + plot_h).contains(&y) {
            continue;
        }
        writeln!(
            svg,
            r##"<line x1="{MARGIN_LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##,
            MARGIN_LEFT + plot_w
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">1e{exp}</text>"#,
            MARGIN_LEFT - 6.0,
            y + 4.0
        )
        .unwrap();
    }

    // x ticks: decades for log-log, the observed grid otherwise.
    let mut x_ticks: Vec<f64> = Vec::new();
    if axes == Axes::LogLog {
        for exp in (x_min.floor() as i64)..=(x_max.ceil() as i64) {
            let tick = 10f64.powi(exp as i32);
            if x_raw(tick) >= x_min - 1e-9 && x_raw(tick) <= x_max + 1e-9 {
                x_ticks.push(tick);
            }
        }
    } else {
        let mut seen: Vec<f64> = rows.iter().map(x_of).collect();
        seen.sort_by(f64::total_cmp);
        seen.dedup();
        x_ticks = seen;
    }
    for &tick in &x_ticks {
        let x = sx(tick);
        writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#dddddd"/>"##,
            MARGIN_TOP,
            MARGIN_TOP + plot_h
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{tick}</text>"#,
            MARGIN_TOP + plot_h + 16.0
        )
        .unwrap();
    }

    // Axis labels.
    writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle">{x_label}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 16.0
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="20" y="{:.2}" font-family="sans-serif" font-size="13" transform="rotate(-90 20 {:.2})">mean loss</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    )
    .unwrap();

    let polyline = |points: &[(f64, f64)]| -> String {
        points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect::<Vec<_>>()
            .join(" ")
    };

    for (idx, (label, (points, theory))) in curves.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        if !points.is_empty() {
            writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"/>"#,
                polyline(points)
            )
            .unwrap();
        }
        if !theory.is_empty() {
            writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.4" stroke-dasharray="6 4"/>"#,
                polyline(theory)
            )
            .unwrap();
        }
        // Legend entry.
        let ly = MARGIN_TOP + 14.0 + idx as f64 * 18.0;
        let lx = WIDTH - MARGIN_RIGHT + 10.0;
        writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            lx + 18.0
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">{}</text>"#,
            lx + 24.0,
            ly + 4.0,
            escape(label)
        )
        .unwrap();
    }

    writeln!(svg, "</svg>").unwrap();
    Ok(svg)
}

/// Write the plot to `path`.
pub fn emit_plot(rows: &[ResultRow], path: &Path, axes: Axes) -> Result<(), CliError> {
    let svg = render_svg(rows, axes)?;
    std::fs::write(path, svg)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))
}
