//! Minimal SVG 1.1 plots: polylines with optional sample markers and a
//! grayscale heatmap.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 56.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            points,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub markers: Vec<(f64, f64)>,
    pub log_x: bool,
    pub log_y: bool,
}

/// Comment line recording the generation time, or nothing.
pub fn timestamp_comment(enabled: bool) -> String {
    if !enabled {
        return String::new();
    }
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("<!-- generated at unix time {secs} -->\n")
}

fn header(out: &mut String, title: &str, timestamp: bool) {
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&timestamp_comment(timestamp));
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(out, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">{}</text>",
        WIDTH / 2.0,
        escape(title)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-300 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.04 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

impl LinePlot {
    pub fn render(&self, timestamp: bool) -> String {
        let tx = |v: f64| if self.log_x { v.log10() } else { v };
        let ty = |v: f64| if self.log_y { v.log10() } else { v };
        let all = || self.series.iter().flat_map(|s| s.points.iter()).chain(self.markers.iter());
        let (x0, x1) = range(all().map(|p| tx(p.0)));
        let (y0, y1) = range(all().map(|p| ty(p.1)));
        let sx = |v: f64| MARGIN + (tx(v) - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
        let sy = |v: f64| HEIGHT - MARGIN - (ty(v) - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

        let mut out = String::new();
        header(&mut out, &self.title, timestamp);
        let _ = writeln!(
            out,
            "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
            WIDTH - 2.0 * MARGIN,
            HEIGHT - 2.0 * MARGIN
        );
        for (k, (lo, hi)) in [(x0, x1), (y0, y1)].into_iter().enumerate() {
            for i in 0..=4 {
                let v = lo + (hi - lo) * i as f64 / 4.0;
                let shown = if (k == 0 && self.log_x) || (k == 1 && self.log_y) {
                    format!("1e{v:.1}")
                } else {
                    format!("{v:.3}")
                };
                let (x, y, anchor) = if k == 0 {
                    (MARGIN + (WIDTH - 2.0 * MARGIN) * i as f64 / 4.0, HEIGHT - MARGIN + 16.0, "middle")
                } else {
                    (MARGIN - 6.0, HEIGHT - MARGIN - (HEIGHT - 2.0 * MARGIN) * i as f64 / 4.0 + 4.0, "end")
                };
                let _ = writeln!(
                    out,
                    "<text x=\"{x:.2}\" y=\"{y:.2}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"{anchor}\">{shown}</text>"
                );
            }
        }
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
            WIDTH / 2.0,
            HEIGHT - 14.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            "<text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>",
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        );
        for (k, s) in self.series.iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            let pts: Vec<String> = s
                .points
                .iter()
                .filter(|p| tx(p.0).is_finite() && ty(p.1).is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                out,
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
                pts.join(" ")
            );
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" fill=\"{color}\">{}</text>",
                WIDTH - MARGIN + 4.0 - 120.0,
                MARGIN + 14.0 + 14.0 * k as f64,
                escape(&s.label)
            );
        }
        for &(x, y) in &self.markers {
            let _ = writeln!(
                out,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"black\"/>",
                sx(x),
                sy(y)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Grayscale heatmap of `values[i][j]` over `[x0,x1]×[y0,y1]`, row `i`
/// along the first axis. Markers are drawn as red dots.
pub fn heatmap(
    title: &str,
    values: &[Vec<f64>],
    bounds: ((f64, f64), (f64, f64)),
    markers: &[(f64, f64)],
    timestamp: bool,
) -> String {
    let ((x0, x1), (y0, y1)) = bounds;
    let nx = values.len().max(1);
    let ny = values.first().map(|r| r.len()).unwrap_or(1).max(1);
    let (lo, hi) = values
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let (w, h) = (WIDTH - 2.0 * MARGIN, HEIGHT - 2.0 * MARGIN);
    let (cw, ch) = (w / nx as f64, h / ny as f64);

    let mut out = String::new();
    header(&mut out, title, timestamp);
    for (i, row) in values.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let g = (255.0 * (v - lo) / span).round().clamp(0.0, 255.0) as u8;
            let _ = writeln!(
                out,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"rgb({g},{g},{g})\"/>",
                MARGIN + i as f64 * cw,
                HEIGHT - MARGIN - (j + 1) as f64 * ch,
                cw + 0.05,
                ch + 0.05
            );
        }
    }
    for &(x, y) in markers {
        let _ = writeln!(
            out,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#d62728\"/>",
            MARGIN + (x - x0) / (x1 - x0) * w,
            HEIGHT - MARGIN - (y - y0) / (y1 - y0) * h
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">x1 in [{x0:.3}, {x1:.3}], x2 in [{y0:.3}, {y1:.3}], h in [{lo:.3}, {hi:.3}]</text>",
        WIDTH / 2.0,
        HEIGHT - 14.0
    );
    out.push_str("</svg>\n");
    out
}
