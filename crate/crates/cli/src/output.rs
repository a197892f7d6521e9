//! Serialization: 17 significant digits everywhere, LF-terminated CSV,
//! JSON with a fixed field order, and static SVG line and bar charts.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
    /// Plain-text table (`validate` only).
    Table,
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any f64.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "NaN".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// A JSON number carrying exactly the digits of [`num`]; `null` when not finite.
pub fn jnum(v: f64) -> Value {
    if v.is_finite() {
        Value::Number(Number::from_str(&num(v)).expect("formatted float is a JSON number"))
    } else {
        Value::Null
    }
}

pub fn jint(v: usize) -> Value {
    Value::from(v as u64)
}

/// Object with fields in insertion order.
pub fn object<I, K>(fields: I) -> Value
where
    I: IntoIterator<Item = (K, Value)>,
    K: Into<String>,
{
    Value::Object(fields.into_iter().map(|(k, v)| (k.into(), v)).collect::<Map<_, _>>())
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let csv_err = |e: csv::Error| Failure::Io(std::io::Error::other(e));
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("CSV fields are UTF-8"))
}

pub fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit<'a>(points: impl Iterator<Item = &'a (f64, f64)>) -> Self {
        let mut f = Frame {
            x0: f64::INFINITY,
            x1: f64::NEG_INFINITY,
            y0: f64::INFINITY,
            y1: f64::NEG_INFINITY,
        };
        for &(x, y) in points.filter(|(x, y)| x.is_finite() && y.is_finite()) {
            f.x0 = f.x0.min(x);
            f.x1 = f.x1.max(x);
            f.y0 = f.y0.min(y);
            f.y1 = f.y1.max(y);
        }
        if !f.x0.is_finite() {
            f = Frame {
                x0: 0.0,
                x1: 1.0,
                y0: 0.0,
                y1: 1.0,
            };
        }
        if f.x1 == f.x0 {
            f.x1 = f.x0 + 1.0;
        }
        if f.y1 == f.y0 {
            f.y0 -= 0.5;
            f.y1 += 0.5;
        }
        f
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn header(svg: &mut String, title: &str, x_label: &str, frame: &Frame) {
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(title));
    let (l, r, b, t) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M{l} {t} L{l} {b} L{r} {b}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0,
        escape(x_label)
    );
    for (v, x, y, anchor) in [
        (frame.x0, l, b + 16.0, "start"),
        (frame.x1, r, b + 16.0, "end"),
        (frame.y0, l - 4.0, b, "end"),
        (frame.y1, l - 4.0, t + 4.0, "end"),
    ] {
        let _ = writeln!(svg, r#"<text x="{x}" y="{y}" text-anchor="{anchor}">{v:.4}</text>"#);
    }
}

/// One polyline per series, with the data points at full precision in a
/// `data-points` attribute.
pub fn line_chart(title: &str, x_label: &str, series: &[(&str, Vec<(f64, f64)>)]) -> String {
    let frame = Frame::fit(series.iter().flat_map(|s| s.1.iter()));
    let mut svg = String::new();
    header(&mut svg, title, x_label, &frame);
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = pts
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.3},{:.3}", frame.px(x), frame.py(y)))
            .collect();
        let data: Vec<String> = pts.iter().map(|&(x, y)| format!("{} {}", num(x), num(y))).collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}" data-series="{}" data-points="{}"/>"#,
            path.join(" "),
            escape(name),
            data.join(";")
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
            WIDTH - MARGIN - 120.0,
            MARGIN + 16.0 * i as f64,
            escape(name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Vertical bars at integer abscissae.
pub fn bar_chart(title: &str, x_label: &str, bars: &[(usize, f64)]) -> String {
    let pts: Vec<(f64, f64)> = bars.iter().map(|&(n, v)| (n as f64, v)).collect();
    let mut frame = Frame::fit(pts.iter().chain(std::iter::once(&(0.0, 0.0))));
    frame.x0 -= 0.5;
    frame.x1 += 0.5;
    let mut svg = String::new();
    header(&mut svg, title, x_label, &frame);
    let w = 0.8 * (frame.px(1.0) - frame.px(0.0));
    for &(x, y) in pts.iter().filter(|(_, y)| y.is_finite()) {
        let top = frame.py(y.max(0.0));
        let bottom = frame.py(0.0_f64.min(y));
        let _ = writeln!(
            svg,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}" data-n="{}" data-value="{}"/>"#,
            frame.px(x) - w / 2.0,
            top,
            w,
            (bottom - top).max(0.0),
            COLORS[0],
            x as usize,
            num(y)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
