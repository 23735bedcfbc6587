//! CSV, JSON and SVG writers, and atomic emission of a scenario's files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::scenario::{Format, Scenario};
use crate::table::{column_index, compute_table, Row, COLUMNS};
use crate::CliError;

/// Seventeen significant digits, enough to round-trip any `f64`. Negative
/// zero is written as zero.
fn number(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = COLUMNS.join(",");
    out.push_str("\r\n");
    for row in rows {
        let line: Vec<String> = row.values.iter().map(|&x| number(x)).collect();
        out.push_str(&line.join(","));
        out.push_str("\r\n");
    }
    out
}

pub fn to_json(scenario: &Scenario, rows: &[Row]) -> Result<String, CliError> {
    let records: Vec<Value> = rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (name, &x) in COLUMNS.iter().zip(row.values.iter()) {
                obj.insert((*name).to_string(), Value::from(x + 0.0));
            }
            Value::Object(obj)
        })
        .collect();
    let mut doc = Map::new();
    doc.insert("scenario".into(), serde_json::to_value(scenario)?);
    doc.insert("rows".into(), Value::Array(records));
    let mut text = serde_json::to_string_pretty(&Value::Object(doc))?;
    text.push('\n');
    Ok(text)
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// Label text for a tick, trimmed so the axis stays readable.
fn tick_label(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Line plot of the selected columns against `gamma0_t`.
pub fn render_svg(rows: &[Row], columns: &[&str]) -> Result<String, CliError> {
    if columns.is_empty() {
        return Err(CliError::PlotInput("at least one column"));
    }
    if rows.len() < 2 {
        return Err(CliError::PlotInput("at least two rows"));
    }
    let indices = columns
        .iter()
        .map(|c| column_index(c).ok_or_else(|| CliError::UnknownColumn((*c).to_string())))
        .collect::<Result<Vec<_>, _>>()?;

    let (t0, t1) = (rows[0].t(), rows[rows.len() - 1].t());
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for row in rows {
        for &k in &indices {
            lo = lo.min(row.values[k]);
            hi = hi.max(row.values[k]);
        }
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(CliError::PlotInput("finite values"));
    }
    if hi - lo < 1e-12 {
        lo -= 0.5;
        hi += 0.5;
    }
    let span_t = if t1 > t0 { t1 - t0 } else { 1.0 };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x_of = |t: f64| LEFT + (t - t0) / span_t * plot_w;
    let y_of = |v: f64| TOP + (hi - v) / (hi - lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for i in 0..=TICKS {
        let frac = i as f64 / TICKS as f64;
        let t = t0 + frac * span_t;
        let x = x_of(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            TOP + plot_h,
            TOP + plot_h + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + plot_h + 19.0,
            tick_label(t)
        );
        let v = lo + frac * (hi - lo);
        let y = y_of(v);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/>"#,
            LEFT - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 8.0,
            y + 4.0,
            tick_label(v)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">γ₀t</text>"#,
        LEFT + 0.5 * plot_w,
        HEIGHT - 8.0
    );
    for (n, (&k, name)) in indices.iter().zip(columns).enumerate() {
        let color = PALETTE[n % PALETTE.len()];
        let points: Vec<String> = rows
            .iter()
            .map(|row| format!("{:.3},{:.3}", x_of(row.t()), y_of(row.values[k])))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let ly = TOP + 16.0 + 16.0 * n as f64;
        let lx = WIDTH - RIGHT - 130.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/>"#,
            ly - 4.0,
            lx + 20.0,
            ly - 4.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{ly:.2}">{name}</text>"#,
            lx + 26.0
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
        Format::Svg => "svg",
    }
}

fn partial_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".partial");
    path.with_file_name(name)
}

/// Computes the scenario and writes `<name>.<ext>` for every requested
/// format into `out_dir`. Files are staged as `.partial` and renamed once
/// all of them are written; on any failure nothing from this run is left.
pub fn run_scenario(s: &Scenario, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    s.validate()?;
    let rows = compute_table(s)?;
    let mut documents = Vec::with_capacity(s.formats.len());
    for &format in &s.formats {
        let text = match format {
            Format::Csv => to_csv(&rows),
            Format::Json => to_json(s, &rows)?,
            Format::Svg => {
                let columns: Vec<&str> = s.plot_columns.iter().map(String::as_str).collect();
                render_svg(&rows, &columns)?
            }
        };
        documents.push((
            out_dir.join(format!("{}.{}", s.name, extension(format))),
            text,
        ));
    }

    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let mut staged = Vec::new();
    let mut finished = Vec::new();
    let result = (|| {
        for (path, text) in &documents {
            let partial = partial_path(path);
            staged.push(partial.clone());
            fs::write(&partial, text).map_err(|e| CliError::io(&partial, e))?;
        }
        for (path, _) in &documents {
            fs::rename(partial_path(path), path).map_err(|e| CliError::io(path, e))?;
            finished.push(path.clone());
        }
        Ok(())
    })();
    if let Err(e) = result {
        for path in staged.iter().chain(&finished) {
            let _ = fs::remove_file(path);
        }
        return Err(e);
    }
    Ok(finished)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(t: f64, f: f64) -> Row {
        let mut values = [0.0; 13];
        values[0] = t;
        values[1] = f;
        Row { values }
    }

    #[test]
    fn csv_round_trips_exactly() {
        let x = 0.1 + 0.2;
        let csv = to_csv(&[row(0.0, x)]);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), COLUMNS.join(","));
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields.len(), 13);
        assert_eq!(fields[1].parse::<f64>().unwrap(), x);
        assert_eq!(fields[1], "3.0000000000000004e-1");
    }

    #[test]
    fn two_rows_give_one_segment_per_series() {
        let svg = render_svg(&[row(0.0, 1.0), row(1.0, 0.5)], &["F_closed", "F_sld"]).unwrap();
        let polylines: Vec<&str> = svg.lines().filter(|l| l.starts_with("<polyline")).collect();
        assert_eq!(polylines.len(), 2);
        let points = polylines[0].split("points=\"").nth(1).unwrap();
        assert_eq!(points.trim_end_matches("\"/>").split(' ').count(), 2);
    }

    #[test]
    fn svg_rejects_bad_selections() {
        let rows = [row(0.0, 1.0), row(1.0, 0.5)];
        assert!(matches!(
            render_svg(&rows, &[]),
            Err(CliError::PlotInput(_))
        ));
        assert!(matches!(
            render_svg(&rows, &["F"]),
            Err(CliError::UnknownColumn(_))
        ));
        assert!(matches!(
            render_svg(&rows[..1], &["F_closed"]),
            Err(CliError::PlotInput(_))
        ));
    }

    #[test]
    fn constant_series_still_plots() {
        let svg = render_svg(&[row(0.0, 0.0), row(1.0, 0.0)], &["F_closed"]).unwrap();
        assert!(svg.contains("<polyline"));
    }

    #[test]
    fn tick_labels_are_compact() {
        assert_eq!(tick_label(4.0), "4");
        assert_eq!(tick_label(0.25), "0.25");
        assert_eq!(tick_label(-0.0001), "0");
    }
}
