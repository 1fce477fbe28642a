//! Static SVG line plots rendered from a CSV table.
//!
//! The plot depends on nothing but the CSV text, so re-rendering a saved
//! table reproduces the figure byte for byte.

use std::fmt::Write;

use crate::exit::Failure;

/// Columns drawn as series when present, in this order.
const SERIES: [&str; 5] = ["computed", "ratio", "predicted", "bound", "tightness"];
/// Drawn only when none of [`SERIES`] is present (slack-only tables).
const FALLBACK: [&str; 1] = ["slack"];
const COLORS: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#7f7f7f", "#9467bd"];

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 130.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

struct Parsed {
    x_name: String,
    xs: Vec<f64>,
    series: Vec<(String, Vec<f64>)>,
}

fn parse(csv: &str) -> Result<Parsed, Failure> {
    let mut lines = csv.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| Failure::malformed("empty CSV"))?
        .split(',')
        .collect();
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    if rows.is_empty() {
        return Err(Failure::malformed("CSV has a header but no rows"));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != header.len()) {
        return Err(Failure::malformed(format!(
            "CSV row {} has {} fields, header has {}",
            i + 2,
            rows[i].len(),
            header.len()
        )));
    }
    let column =
        |j: usize| -> Option<Vec<f64>> { rows.iter().map(|r| r[j].parse().ok()).collect() };
    // x: the first numeric column that is not a plotted series
    let x = (0..header.len())
        .find(|&j| !SERIES.contains(&header[j]) && column(j).is_some())
        .ok_or_else(|| Failure::malformed("CSV has no numeric column to plot against"))?;
    let pick = |names: &[&str]| -> Vec<(String, Vec<f64>)> {
        names
            .iter()
            .filter_map(|name| {
                let j = header.iter().position(|h| h == name)?;
                column(j).map(|v| (name.to_string(), v))
            })
            .collect()
    };
    let mut series = pick(&SERIES);
    if series.is_empty() {
        series = pick(&FALLBACK);
    }
    if series.is_empty() {
        return Err(Failure::malformed(format!(
            "CSV has none of the plottable columns {SERIES:?} or {FALLBACK:?}"
        )));
    }
    Ok(Parsed {
        x_name: header[x].to_string(),
        xs: column(x).expect("checked numeric"),
        series,
    })
}

fn extent(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values
        .filter(|v| v.is_finite())
        .fold(None, |acc, v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
}

fn widen((lo, hi): (f64, f64)) -> (f64, f64) {
    if hi > lo {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { 0.05 * lo.abs() };
        (lo - pad, hi + pad)
    }
}

fn label(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-3) {
        format!("{v:.1e}")
    } else {
        format!("{}", (v * 1e3).round() / 1e3)
    }
}

/// Renders the CSV as an SVG line chart titled `title`.
pub fn render(csv: &str, title: &str) -> Result<String, Failure> {
    let data = parse(csv)?;
    let log_x = data.xs.iter().all(|&x| x > 0.0)
        && extent(data.xs.iter().copied()).is_some_and(|(lo, hi)| hi / lo >= 100.0);
    let tx = |x: f64| if log_x { x.log10() } else { x };
    let (x0, x1) = widen(extent(data.xs.iter().map(|&x| tx(x))).unwrap_or((0.0, 1.0)));
    let (y0, y1) = widen(
        extent(data.series.iter().flat_map(|(_, v)| v.iter().copied())).unwrap_or((0.0, 1.0)),
    );
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let px = |x: f64| LEFT + (tx(x) - x0) / (x1 - x0) * pw;
    let py = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let yv = y0 + f * (y1 - y0);
        let y = py(yv);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            LEFT + pw,
            LEFT - 6.0,
            y + 4.0,
            label(yv)
        );
        let xv = x0 + f * (x1 - x0);
        let x = LEFT + f * pw;
        let shown = if log_x { 10f64.powf(xv) } else { xv };
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph + 18.0,
            label(shown)
        );
    }
    let axis = if log_x {
        format!("{} (log scale)", data.x_name)
    } else {
        data.x_name.clone()
    };
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 10.0,
        escape(&axis)
    );
    for (k, (name, ys)) in data.series.iter().enumerate() {
        let color = COLORS[SERIES.iter().position(|n| n == name).unwrap_or(k) % COLORS.len()];
        let points: Vec<String> = data
            .xs
            .iter()
            .zip(ys)
            .filter(|(x, y)| tx(**x).is_finite() && y.is_finite())
            .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let ly = TOP + 14.0 + 18.0 * k as f64;
        let lx = LEFT + pw + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{ly:.2}">{}</text>"#,
            ly - 4.0,
            lx + 20.0,
            ly - 4.0,
            lx + 26.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
