//! Hand-written SVG: seven-panel metric plots and colored skeletons.
//! Coordinates are printed with two decimals so the output is stable.

use std::fmt::Write;

use skelxai::attribution::Method;
use skelxai::metrics::Metric;

use crate::config::ColorRule;

pub fn method_style(m: Method) -> (&'static str, &'static str, &'static str) {
    // (label, stroke, dash pattern); CAM and Grad-CAM often coincide, so
    // Grad-CAM is dashed on top
    match m {
        Method::Cam => ("CAM", "#1f77b4", "none"),
        Method::Gradcam => ("Grad-CAM", "#d62728", "6 4"),
        Method::Random => ("Random", "#7f7f7f", "none"),
        Method::Fixed => ("Fixed", "#2ca02c", "2 2"),
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn header(out: &mut String, width: f64, height: f64, stamp: &str) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif">"#
    )
    .unwrap();
    writeln!(out, "<!-- {stamp} -->").unwrap();
    writeln!(out, "<metadata>{stamp}</metadata>").unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
}

pub struct Series {
    pub method: Method,
    /// `(k, value)` in increasing k.
    pub points: Vec<(f64, f64)>,
}

pub struct Panel {
    pub metric: Metric,
    pub series: Vec<Series>,
    pub annotation: String,
}

impl Panel {
    /// ROS and RRS span orders of magnitude and are drawn on a log axis.
    pub fn log_scale(&self) -> bool {
        matches!(self.metric, Metric::Ros | Metric::Rrs)
    }
}

const PANEL_W: f64 = 300.0;
const PANEL_H: f64 = 230.0;
const COLUMNS: usize = 4;
const PAD_L: f64 = 58.0;
const PAD_R: f64 = 12.0;
const PAD_T: f64 = 28.0;
const PAD_B: f64 = 48.0;

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-3 {
        format!("{v:.0e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Value range and tick positions; log panels work in log10 units.
fn y_axis(values: &[f64], log: bool) -> (f64, f64, Vec<(f64, String)>) {
    if log {
        let positive: Vec<f64> = values.iter().copied().filter(|v| *v > 0.0).collect();
        let (lo, hi) = if positive.is_empty() {
            (-1.0, 0.0)
        } else {
            let min = positive.iter().copied().fold(f64::INFINITY, f64::min);
            let max = positive.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = min.log10().floor();
            let hi = max.log10().ceil().max(lo + 1.0);
            (lo, hi)
        };
        let step = ((hi - lo) / 6.0).ceil().max(1.0);
        let mut ticks = Vec::new();
        let mut e = lo;
        while e <= hi + 1e-9 {
            ticks.push((e, format!("1e{e:.0}")));
            e += step;
        }
        (lo, hi, ticks)
    } else {
        let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
        let mut lo = finite.iter().copied().fold(0.0, f64::min);
        let mut hi = finite.iter().copied().fold(0.0, f64::max);
        if hi - lo < 1e-12 {
            hi = lo + 1.0;
        }
        hi += 0.05 * (hi - lo);
        if lo < 0.0 {
            lo -= 0.05 * (hi - lo);
        }
        let ticks = (0..=4)
            .map(|i| {
                let v = lo + (hi - lo) * i as f64 / 4.0;
                (v, fmt_tick(v))
            })
            .collect();
        (lo, hi, ticks)
    }
}

fn draw_panel(out: &mut String, panel: &Panel, x0: f64, y0: f64) {
    let log = panel.log_scale();
    let (w, h) = (PANEL_W - PAD_L - PAD_R, PANEL_H - PAD_T - PAD_B);
    let all: Vec<f64> = panel.series.iter().flat_map(|s| s.points.iter().map(|p| p.1)).collect();
    let ks: Vec<f64> = panel.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).collect();
    let k_lo = ks.iter().copied().fold(f64::INFINITY, f64::min);
    let k_hi = ks.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (k_lo, k_hi) = if ks.is_empty() { (1.0, 2.0) } else if k_hi > k_lo { (k_lo, k_hi) } else { (k_lo, k_lo + 1.0) };
    let (lo, hi, ticks) = y_axis(&all, log);
    let sx = |k: f64| x0 + PAD_L + (k - k_lo) / (k_hi - k_lo) * w;
    let sy = |v: f64| {
        let u = if log { v.max(10f64.powf(lo)).log10() } else { v };
        y0 + PAD_T + h - (u - lo) / (hi - lo) * h
    };
    let scale = if log { "log" } else { "linear" };
    let arrow = if panel.metric.higher_is_better() { "\u{2191}" } else { "\u{2193}" };
    writeln!(
        out,
        r#"<g class="panel" id="panel-{}" data-metric="{}" data-scale="{scale}">"#,
        panel.metric.label(),
        panel.metric.label()
    )
    .unwrap();
    writeln!(
        out,
        r#"<text class="title" x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{} ({arrow}){}</text>"#,
        x0 + PAD_L + w / 2.0,
        y0 + 18.0,
        panel.metric.display_name(),
        if log { ", log scale" } else { "" }
    )
    .unwrap();
    writeln!(
        out,
        r##"<rect x="{:.2}" y="{:.2}" width="{w:.2}" height="{h:.2}" fill="none" stroke="#444"/>"##,
        x0 + PAD_L,
        y0 + PAD_T
    )
    .unwrap();
    for (u, label) in &ticks {
        let y = y0 + PAD_T + h - (u - lo) / (hi - lo) * h;
        writeln!(
            out,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" font-size="9" text-anchor="end">{label}</text>"##,
            x0 + PAD_L,
            x0 + PAD_L + w,
            x0 + PAD_L - 4.0,
            y + 3.0
        )
        .unwrap();
    }
    let k_step = ((k_hi - k_lo) / 6.0).ceil().max(1.0);
    let mut k = k_lo;
    while k <= k_hi + 1e-9 {
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="9" text-anchor="middle">{k:.0}</text>"#,
            sx(k),
            y0 + PAD_T + h + 12.0
        )
        .unwrap();
        k += k_step;
    }
    writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="middle">k</text>"#,
        x0 + PAD_L + w / 2.0,
        y0 + PAD_T + h + 24.0
    )
    .unwrap();
    for (i, s) in panel.series.iter().enumerate() {
        let (label, stroke, dash) = method_style(s.method);
        let pts: Vec<String> = s.points.iter().map(|&(k, v)| format!("{:.2},{:.2}", sx(k), sy(v))).collect();
        writeln!(
            out,
            r#"<polyline class="line" data-method="{}" points="{}" fill="none" stroke="{stroke}" stroke-width="1.6" stroke-dasharray="{dash}"/>"#,
            s.method.label(),
            pts.join(" ")
        )
        .unwrap();
        let ly = y0 + PAD_T + 10.0 + 11.0 * i as f64;
        let lx = x0 + PAD_L + w - 70.0;
        writeln!(
            out,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{stroke}" stroke-dasharray="{dash}"/><text x="{:.2}" y="{:.2}" font-size="9">{label}</text>"#,
            lx + 14.0,
            lx + 17.0,
            ly + 3.0
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text class="pvalue" x="{:.2}" y="{:.2}" font-size="10" text-anchor="middle">{}</text>"#,
        x0 + PAD_L + w / 2.0,
        y0 + PANEL_H - 6.0,
        escape(&panel.annotation)
    )
    .unwrap();
    writeln!(out, "</g>").unwrap();
}

/// Panels in the given order on a four-column grid.
pub fn metric_figure(title: &str, panels: &[Panel], stamp: &str) -> String {
    let rows = panels.len().div_ceil(COLUMNS).max(1);
    let (width, height) = (COLUMNS as f64 * PANEL_W, 30.0 + rows as f64 * PANEL_H);
    let mut out = String::new();
    header(&mut out, width, height, stamp);
    writeln!(
        out,
        r#"<text x="{:.2}" y="20" font-size="15" text-anchor="middle">{}</text>"#,
        width / 2.0,
        escape(title)
    )
    .unwrap();
    for (i, panel) in panels.iter().enumerate() {
        let (row, col) = (i / COLUMNS, i % COLUMNS);
        draw_panel(&mut out, panel, col as f64 * PANEL_W, 30.0 + row as f64 * PANEL_H);
    }
    out.push_str("</svg>\n");
    out
}

pub struct SkeletonView<'a> {
    pub title: String,
    pub names: &'a [String],
    pub bones: &'a [(usize, usize)],
    /// Joint positions in image coordinates (y down).
    pub pose: Vec<[f64; 2]>,
    /// Normalized attribution in `[0, 1]`.
    pub scores: &'a [f64],
}

/// One pose with joints filled by the color rule.
pub fn skeleton_figure(view: &SkeletonView<'_>, rule: &ColorRule, stamp: &str) -> String {
    let (width, height) = (300.0_f64, 400.0_f64);
    let (margin, top) = (30.0_f64, 40.0_f64);
    let xs = view.pose.iter().map(|p| p[0]);
    let ys = view.pose.iter().map(|p| p[1]);
    let (x_lo, x_hi) = (xs.clone().fold(f64::INFINITY, f64::min), xs.fold(f64::NEG_INFINITY, f64::max));
    let (y_lo, y_hi) = (ys.clone().fold(f64::INFINITY, f64::min), ys.fold(f64::NEG_INFINITY, f64::max));
    let span = (x_hi - x_lo).max(y_hi - y_lo).max(1e-9);
    let scale = ((width - 2.0 * margin).min(height - top - 2.0 * margin)) / span;
    let cx = width / 2.0 - (x_lo + x_hi) / 2.0 * scale;
    let cy = top + (height - top - 40.0) / 2.0 - (y_lo + y_hi) / 2.0 * scale;
    let at = |j: usize| (cx + view.pose[j][0] * scale, cy + view.pose[j][1] * scale);

    let mut out = String::new();
    header(&mut out, width, height, stamp);
    writeln!(
        out,
        r#"<text x="{:.2}" y="22" font-size="12" text-anchor="middle">{}</text>"#,
        width / 2.0,
        escape(&view.title)
    )
    .unwrap();
    for &(a, b) in view.bones {
        let ((x1, y1), (x2, y2)) = (at(a), at(b));
        writeln!(out, r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#555" stroke-width="3"/>"##).unwrap();
    }
    for (j, name) in view.names.iter().enumerate() {
        let (x, y) = at(j);
        let s = view.scores[j];
        writeln!(
            out,
            r##"<circle class="joint" data-joint="{}" data-score="{s:.4}" cx="{x:.2}" cy="{y:.2}" r="7" fill="{}" stroke="#222"><title>{} {s:.3}</title></circle>"##,
            escape(name),
            rule.color(s),
            escape(name)
        )
        .unwrap();
    }
    let t = rule.threshold;
    let bands = [
        ("green", format!("< {:.3}", 0.3 * t)),
        ("yellow", format!("< {:.3}", 0.6 * t)),
        ("orange", format!("< {t:.3}")),
        ("red", format!(">= {t:.3}")),
    ];
    for (i, (color, text)) in bands.iter().enumerate() {
        let x = 20.0 + 70.0 * i as f64;
        writeln!(
            out,
            r##"<circle cx="{x:.2}" cy="{:.2}" r="5" fill="{color}" stroke="#222"/><text x="{:.2}" y="{:.2}" font-size="9">{text}</text>"##,
            height - 18.0,
            x + 8.0,
            height - 15.0
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
