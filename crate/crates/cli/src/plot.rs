//! Small deterministic SVG writer for the two standard figures. Output is a
//! pure function of the input rows, so reruns hash identically.

use std::fmt::Write as _;

use crate::config::Band;
use crate::runner::{BenchRow, CurveRow, ResultRow, SeriesRow};

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD_L: f64 = 64.0;
const PAD_R: f64 = 16.0;
const PAD_T: f64 = 28.0;
const PAD_B: f64 = 48.0;

const MARKER: &str = "#1f77b4";
const BENCH: &str = "#444444";
const FIT: &str = "#d62728";

fn num(x: f64) -> String {
    // Fixed precision keeps files stable and small.
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    top: f64,
    height: f64,
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64), top: f64, height: f64) -> Self {
        let pad = |(a, b): (f64, f64), frac: f64| {
            if !(b > a) {
                let c = if a.is_finite() { a } else { 0.0 };
                (c - 1.0, c + 1.0)
            } else {
                let d = (b - a) * frac;
                (a - d, b + d)
            }
        };
        let (x0, x1) = pad(x, 0.03);
        let (y0, y1) = pad(y, 0.08);
        Self { x0, x1, y0, y1, top, height }
    }

    fn px(&self, x: f64) -> f64 {
        PAD_L + (x - self.x0) / (self.x1 - self.x0) * (W - PAD_L - PAD_R)
    }

    fn py(&self, y: f64) -> f64 {
        self.top + self.height - (y - self.y0) / (self.y1 - self.y0) * self.height
    }

    fn axes(&self, svg: &mut String, xlabel: &str, ylabel: &str) {
        let (l, r, t, b) = (PAD_L, W - PAD_R, self.top, self.top + self.height);
        let _ = writeln!(
            svg,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black" stroke-width="1"/>"#,
            num(l),
            num(t),
            num(r - l),
            num(b - t)
        );
        for k in 0..=4 {
            let fx = self.x0 + (self.x1 - self.x0) * k as f64 / 4.0;
            let fy = self.y0 + (self.y1 - self.y0) * k as f64 / 4.0;
            let (x, y) = (self.px(fx), self.py(fy));
            let _ = writeln!(
                svg,
                r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="black"/><text x="{0}" y="{3}" font-size="10" text-anchor="middle">{4}</text>"#,
                num(x),
                num(b),
                num(b + 4.0),
                num(b + 15.0),
                tick(fx)
            );
            let _ = writeln!(
                svg,
                r#"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="black"/><text x="{3}" y="{4}" font-size="10" text-anchor="end">{5}</text>"#,
                num(l - 4.0),
                num(y),
                num(l),
                num(l - 6.0),
                num(y + 3.0),
                tick(fy)
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
            num((l + r) / 2.0),
            num(b + 32.0),
            esc(xlabel)
        );
        let _ = writeln!(
            svg,
            r#"<text x="14" y="{0}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {0})">{1}</text>"#,
            num((t + b) / 2.0),
            esc(ylabel)
        );
    }

    fn polyline(&self, svg: &mut String, pts: &[(f64, f64)], color: &str, dashed: bool) {
        if pts.len() < 2 {
            return;
        }
        let d: Vec<String> = pts.iter().map(|&(x, y)| format!("{},{}", num(self.px(x)), num(self.py(y)))).collect();
        let dash = if dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#,
            d.join(" ")
        );
    }

    fn marker(&self, svg: &mut String, x: f64, y: f64, err: Option<f64>, color: &str) {
        let (cx, cy) = (self.px(x), self.py(y));
        if let Some(e) = err.filter(|e| e.is_finite() && *e > 0.0) {
            let _ = writeln!(
                svg,
                r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="{color}"/>"#,
                num(cx),
                num(self.py(y - e)),
                num(self.py(y + e))
            );
        }
        let _ = writeln!(svg, r#"<circle cx="{}" cy="{}" r="3" fill="{color}"/>"#, num(cx), num(cy));
    }
}

fn tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-2..1e4).contains(&a) {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    }
}

fn extent(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    vals.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)))
}

fn header(height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        w = num(W),
        h = num(height)
    )
}

/// Estimated gaps with error bars over the benchmark curve, with optional
/// shaded parameter bands. Failed points are skipped.
pub fn sweep_svg(rows: &[ResultRow], bench: &[BenchRow], bands: &[Band], xlabel: &str) -> String {
    let ok: Vec<&ResultRow> = rows.iter().filter(|r| r.gap_est.is_some()).collect();
    let xs = extent(ok.iter().map(|r| r.sweep_value).chain(bench.iter().map(|b| b.sweep_value)));
    let ys = extent(
        ok.iter()
            .flat_map(|r| {
                let g = r.gap_est.unwrap();
                let e = r.gap_std.filter(|e| e.is_finite()).unwrap_or(0.0);
                [g - e, g + e]
            })
            .chain(bench.iter().map(|b| b.gap_exact)),
    );
    let f = Frame::new(xs, (ys.0.min(0.0), ys.1), PAD_T, H - PAD_T - PAD_B);
    let mut svg = header(H);
    for b in bands {
        let lo = b.lo.max(f.x0);
        let hi = b.hi.min(f.x1);
        if hi <= lo {
            continue;
        }
        let _ = writeln!(
            svg,
            r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#999999" fill-opacity="0.2"><title>{}</title></rect>"##,
            num(f.px(lo)),
            num(f.top),
            num(f.px(hi) - f.px(lo)),
            num(f.height),
            esc(&b.label)
        );
        if !b.label.is_empty() {
            let _ = writeln!(
                svg,
                r##"<text x="{}" y="{}" font-size="10" text-anchor="middle" fill="#555555">{}</text>"##,
                num((f.px(lo) + f.px(hi)) / 2.0),
                num(f.top + 12.0),
                esc(&b.label)
            );
        }
    }
    f.axes(&mut svg, xlabel, "gap");
    let line: Vec<(f64, f64)> = bench.iter().map(|b| (b.sweep_value, b.gap_exact)).collect();
    f.polyline(&mut svg, &line, BENCH, true);
    for r in ok {
        f.marker(&mut svg, r.sweep_value, r.gap_est.unwrap(), r.gap_std, MARKER);
    }
    svg.push_str("</svg>\n");
    svg
}

/// One panel per sweep value: measured nodes with error bars, the fitted
/// sinusoid and the exact noiseless signal.
pub fn waves_svg(series: &[SeriesRow], curves: &[CurveRow]) -> String {
    let mut values: Vec<f64> = series.iter().map(|s| s.sweep_value).collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let panel = 220.0;
    let total = PAD_T + values.len().max(1) as f64 * (panel + PAD_B);
    let mut svg = header(total);
    for (k, &x) in values.iter().enumerate() {
        let pts: Vec<&SeriesRow> = series.iter().filter(|s| s.sweep_value == x).collect();
        let cur: Vec<&CurveRow> = curves.iter().filter(|c| c.sweep_value == x).collect();
        let ts = extent(pts.iter().map(|s| s.t).chain(cur.iter().map(|c| c.t)));
        let ys = extent(
            pts.iter()
                .flat_map(|s| [s.value - s.sigma, s.value + s.sigma])
                .chain(cur.iter().flat_map(|c| [c.fit, c.exact]).flatten()),
        );
        let top = PAD_T + k as f64 * (panel + PAD_B);
        let f = Frame::new(ts, ys, top, panel);
        f.axes(&mut svg, "t", &format!("⟨O⟩ at {}", tick(x)));
        let exact: Vec<(f64, f64)> = cur.iter().filter_map(|c| c.exact.map(|e| (c.t, e))).collect();
        f.polyline(&mut svg, &exact, BENCH, true);
        let fit: Vec<(f64, f64)> = cur.iter().filter_map(|c| c.fit.map(|e| (c.t, e))).collect();
        f.polyline(&mut svg, &fit, FIT, false);
        for s in pts {
            let color = if s.used { MARKER } else { "#aaaaaa" };
            f.marker(&mut svg, s.t, s.value, Some(s.sigma), color);
        }
    }
    svg.push_str("</svg>\n");
    svg
}
