//! Minimal SVG rendering: line plots and a spectrogram heatmap with overlays.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 56.0;
const PALETTE: [&str; 4] = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e"];

/// A named curve. Non-finite `y` values break the polyline.
#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Series {
            name: name.into(),
            points,
            dashed: false,
        }
    }

    pub fn dashed(mut self) -> Self {
        self.dashed = true;
        self
    }
}

/// Intensity grid over `xs × ys`; `values[i][j]` belongs to `(xs[i], ys[j])`.
#[derive(Debug, Clone)]
pub struct Heatmap<'a> {
    pub xs: &'a [f64],
    pub ys: &'a [f64],
    pub values: &'a [Vec<f64>],
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }

    fn around(points: impl Iterator<Item = (f64, f64)>) -> Frame {
        let mut f = Frame {
            x0: f64::INFINITY,
            x1: f64::NEG_INFINITY,
            y0: f64::INFINITY,
            y1: f64::NEG_INFINITY,
        };
        for (x, y) in points.filter(|(x, y)| x.is_finite() && y.is_finite()) {
            f.x0 = f.x0.min(x);
            f.x1 = f.x1.max(x);
            f.y0 = f.y0.min(y);
            f.y1 = f.y1.max(y);
        }
        if !f.x0.is_finite() {
            return Frame { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0 };
        }
        if f.x1 <= f.x0 {
            f.x1 = f.x0 + 1.0;
        }
        if f.y1 <= f.y0 {
            f.y0 -= 0.5;
            f.y1 += 0.5;
        }
        f
    }
}

fn fmt_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.2}")
    }
}

fn open(out: &mut String, title: &str, xlabel: &str, ylabel: &str, f: Frame) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));
    let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, WIDTH / 2.0, HEIGHT - 12.0, escape(xlabel));
    let _ = writeln!(
        out,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(ylabel)
    );
    for (v, x) in [(f.x0, l), (f.x1, r)] {
        let _ = writeln!(out, r#"<text x="{x}" y="{}" text-anchor="middle">{}</text>"#, b + 16.0, fmt_tick(v));
    }
    for (v, y) in [(f.y0, b), (f.y1, t)] {
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, l - 4.0, y + 4.0, fmt_tick(v));
    }
}

fn close(out: &mut String, series: &[Series], f: Frame) {
    let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let (width, dash) = if s.dashed { (3.0, r#" stroke-dasharray="6 4""#) } else { (1.5, "") };
        for run in s.points.split(|(x, y)| !(x.is_finite() && y.is_finite())) {
            if run.is_empty() {
                continue;
            }
            let pts: Vec<String> = run
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y).clamp(t, b)))
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{color}" stroke-width="{width}"{dash} points="{}"/>"#,
                pts.join(" ")
            );
        }
        let y = t + 16.0 * (k as f64 + 1.0);
        let _ = writeln!(out, r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"{dash}/>"#, r - 190.0, r - 166.0);
        let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, r - 160.0, y + 4.0, escape(&s.name));
    }
    let _ = writeln!(out, r#"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="black"/>"#, r - l, b - t);
    out.push_str("</svg>\n");
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Line plot of one or more series on shared axes.
pub fn line_plot(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let f = Frame::around(series.iter().flat_map(|s| s.points.iter().copied()));
    let mut out = String::new();
    open(&mut out, title, xlabel, ylabel, f);
    close(&mut out, series, f);
    out
}

/// Most cells drawn along each axis; finer grids are max-pooled.
const MAX_CELLS: usize = 160;

/// Heatmap (dark = large) clipped to `y ≤ y_max`, with series overlaid.
pub fn heatmap_plot(title: &str, xlabel: &str, ylabel: &str, map: &Heatmap<'_>, y_max: f64, series: &[Series]) -> String {
    let rows: Vec<usize> = (0..map.ys.len()).filter(|&j| map.ys[j] <= y_max).collect();
    let mut out = String::new();
    if map.xs.is_empty() || rows.is_empty() {
        let f = Frame::around(series.iter().flat_map(|s| s.points.iter().copied()));
        open(&mut out, title, xlabel, ylabel, f);
        close(&mut out, series, f);
        return out;
    }
    let f = Frame {
        x0: map.xs[0],
        x1: map.xs[map.xs.len() - 1].max(map.xs[0] + f64::EPSILON),
        y0: map.ys[rows[0]],
        y1: map.ys[*rows.last().unwrap()].max(map.ys[rows[0]] + f64::EPSILON),
    };
    open(&mut out, title, xlabel, ylabel, f);
    let peak = map.values.iter().flatten().fold(0.0_f64, |a, &v| a.max(v));
    let xstep = map.xs.len().div_ceil(MAX_CELLS);
    let ystep = rows.len().div_ceil(MAX_CELLS);
    let cell_w = (f.px(f.x1) - f.px(f.x0)) / map.xs.len().div_ceil(xstep) as f64;
    let cell_h = (f.py(f.y0) - f.py(f.y1)) / rows.len().div_ceil(ystep) as f64;
    for (ci, xs) in (0..map.xs.len()).collect::<Vec<_>>().chunks(xstep).enumerate() {
        for (cj, ys) in rows.chunks(ystep).enumerate() {
            let v = xs
                .iter()
                .flat_map(|&i| ys.iter().map(move |&j| map.values[i][j]))
                .fold(0.0_f64, f64::max);
            let level = if peak > 0.0 { v / peak } else { 0.0 };
            let shade = (255.0 * (1.0 - level)).round() as u8;
            if shade == 255 {
                continue;
            }
            let x = MARGIN + ci as f64 * cell_w;
            let y = HEIGHT - MARGIN - (cj as f64 + 1.0) * cell_h;
            let _ = writeln!(
                out,
                r#"<rect x="{x:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="rgb({shade},{shade},{shade})"/>"#,
                cell_w + 0.3,
                cell_h + 0.3
            );
        }
    }
    close(&mut out, series, f);
    out
}
