//! Minimal standalone SVG charts.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const CLASS_COLORS: [&str; 2] = ["#1f77b4", "#d62728"];

/// A two-column numeric CSV.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<(f64, f64)>,
}

pub fn read_table(path: &Path) -> Result<Table> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let header: Vec<String> =
        rdr.headers().with_context(|| format!("{}: line 1", path.display()))?.iter().map(str::to_owned).collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        bail!("{}: empty CSV", path.display());
    }
    if header.len() != 2 {
        bail!("{}: line 1: expected 2 columns, found {}", path.display(), header.len());
    }
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            anyhow!("{}: line {line}: {e}", path.display())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let cell = |i: usize| -> Result<f64> {
            let text = &record[i];
            match text.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => bail!("{}: line {line}: column {} value {text:?} is not a finite number", path.display(), i + 1),
            }
        };
        rows.push((cell(0)?, cell(1)?));
    }
    if rows.is_empty() {
        bail!("{}: no data rows", path.display());
    }
    Ok(Table { header, rows })
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Round-number tick positions covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    // At least 3 and at most 9 ticks land inside the range.
    let raw = (hi - lo) / 8.0;
    let magnitude = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * magnitude).find(|s| *s >= raw).unwrap_or(10.0 * magnitude);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_owned()
    } else {
        s.to_owned()
    }
}

/// Data range padded so flat series and single points still get an axis.
fn span(values: impl Iterator<Item = f64>, pad: f64) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if hi - lo < 1e-12 {
        return (lo - 1.0, hi + 1.0);
    }
    let margin = (hi - lo) * pad;
    (lo - margin, hi + margin)
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }

    fn open(&self, title: &str, x_label: &str, y_label: &str) -> String {
        let mut s = String::new();
        let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
        writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
        writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        )
        .unwrap();
        writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
        writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, WIDTH / 2.0, escape(title))
            .unwrap();
        writeln!(s, r#"<g stroke="black" stroke-width="1">"#).unwrap();
        writeln!(s, r#"<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}"/>"#).unwrap();
        writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/>"#).unwrap();
        for t in ticks(self.x.0, self.x.1) {
            let p = self.px(t);
            writeln!(s, r#"<line x1="{p:.2}" y1="{y1}" x2="{p:.2}" y2="{:.2}"/>"#, y1 + 5.0).unwrap();
        }
        for t in ticks(self.y.0, self.y.1) {
            let p = self.py(t);
            writeln!(s, r#"<line x1="{:.2}" y1="{p:.2}" x2="{x0}" y2="{p:.2}"/>"#, x0 - 5.0).unwrap();
        }
        writeln!(s, "</g>").unwrap();
        for t in ticks(self.x.0, self.x.1) {
            writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, self.px(t), y1 + 18.0, label(t))
                .unwrap();
        }
        for t in ticks(self.y.0, self.y.1) {
            writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                x0 - 8.0,
                self.py(t) + 4.0,
                label(t)
            )
            .unwrap();
        }
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 12.0,
            escape(x_label)
        )
        .unwrap();
        let cy = (y0 + y1) / 2.0;
        writeln!(
            s,
            r#"<text x="18" y="{cy:.2}" text-anchor="middle" transform="rotate(-90 18 {cy:.2})">{}</text>"#,
            escape(y_label)
        )
        .unwrap();
        s
    }

    fn polyline(&self, points: &[(f64, f64)], color: &str) -> String {
        let coords: Vec<String> = points.iter().map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y))).collect();
        format!(r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, coords.join(" ")) + "\n"
    }
}

/// One polyline through `rows`, e.g. training errors per epoch.
pub fn line_chart(rows: &[(f64, f64)], title: &str, x_label: &str, y_label: &str) -> String {
    let x = span(rows.iter().map(|r| r.0), 0.0);
    let (_, y_hi) = span(rows.iter().map(|r| r.1), 0.05);
    let y_lo = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min).min(0.0);
    let frame = Frame { x, y: (y_lo, y_hi.max(y_lo + 1.0)) };
    let mut s = frame.open(title, x_label, y_label);
    s.push_str(&frame.polyline(rows, "#1f77b4"));
    s.push_str("</svg>\n");
    s
}

/// A boundary curve over an optional labeled scatter.
pub fn boundary_chart(
    curve: &[(f64, f64)],
    points: &[(f64, f64, u8)],
    title: &str,
    x_label: &str,
    y_label: &str,
) -> String {
    let xs = curve.iter().map(|c| c.0).chain(points.iter().map(|p| p.0));
    let ys = curve.iter().map(|c| c.1).chain(points.iter().map(|p| p.1));
    let frame = Frame { x: span(xs, 0.05), y: span(ys, 0.05) };
    let mut s = frame.open(title, x_label, y_label);
    for &(x, y, label) in points {
        writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}" fill-opacity="0.7"/>"#,
            frame.px(x),
            frame.py(y),
            CLASS_COLORS[usize::from(label.min(1))]
        )
        .unwrap();
    }
    s.push_str(&frame.polyline(curve, "black"));
    s.push_str("</svg>\n");
    s
}
