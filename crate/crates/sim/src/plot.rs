//! Static SVG line plot of the summary table: one polyline per scheme.

use std::fmt::Write;

use crate::config::ExperimentConfig;
use crate::runner::SummaryRow;

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 160.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 50.0;

const COLORS: [&str; 10] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

fn metric(cfg: &ExperimentConfig, row: &SummaryRow) -> f64 {
    if cfg.experiment.is_qos() {
        row.mean_eve_sinr_db
    } else {
        row.mean_rate_bits
    }
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

pub fn render_svg(cfg: &ExperimentConfig, summary: &[SummaryRow]) -> String {
    let (x0, x1) = span(cfg.sweep.iter().copied());
    let (y0, y1) = span(summary.iter().map(|r| metric(cfg, r)));
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let px = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * (W - MARGIN_L - MARGIN_R);
    let py = |y: f64| H - MARGIN_B - (y - y0) / (y1 - y0) * (H - MARGIN_T - MARGIN_B);
    let y_label = if cfg.experiment.is_qos() { "worst-case Eve SINR (dB)" } else { "worst-case secrecy rate (bits/s/Hz)" };

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" font-size="14" font-family="sans-serif">{}</text>"#, MARGIN_L, cfg.experiment);
    let (bx, by, bw, bh) = (MARGIN_L, MARGIN_T, W - MARGIN_L - MARGIN_R, H - MARGIN_T - MARGIN_B);
    let _ = writeln!(s, r#"<rect x="{bx}" y="{by}" width="{bw}" height="{bh}" fill="none" stroke="black"/>"#);
    for k in 0..=4 {
        let fx = x0 + (x1 - x0) * k as f64 / 4.0;
        let fy = y0 + (y1 - y0) * k as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="middle" font-family="sans-serif">{:.3}</text>"#, px(fx), H - MARGIN_B + 16.0, fx);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="end" font-family="sans-serif">{:.3}</text>"#, MARGIN_L - 6.0, py(fy) + 4.0, fy);
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle" font-family="sans-serif">{}</text>"#, MARGIN_L + bw / 2.0, H - 12.0, cfg.experiment.sweep_label());
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" font-size="12" text-anchor="middle" font-family="sans-serif" transform="rotate(-90 16 {:.1})">{}</text>"#,
        MARGIN_T + bh / 2.0,
        MARGIN_T + bh / 2.0,
        y_label
    );

    for (i, scheme) in cfg.schemes.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = summary
            .iter()
            .filter(|r| r.scheme == scheme.as_str() && metric(cfg, r).is_finite())
            .map(|r| format!("{:.2},{:.2}", px(r.sweep_value), py(metric(cfg, r))))
            .collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, pts.join(" "));
        let ly = MARGIN_T + 16.0 + 18.0 * i as f64;
        let lx = W - MARGIN_R + 12.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="11" font-family="sans-serif">{}</text>"#, lx + 26.0, ly + 4.0, scheme);
    }
    s.push_str("</svg>\n");
    s
}
