//! Minimal self-contained SVG plots: scatter and line series on linear axes.

use std::fmt::Write as _;

const PANEL_W: f64 = 480.0;
const PANEL_H: f64 = 360.0;
const MARGIN_L: f64 = 78.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 36.0;
const MARGIN_B: f64 = 52.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Scatter,
    Line,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub style: Style,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

pub fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Round step of roughly `span / 5`.
fn tick_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let nice = if f < 1.5 {
        1.0
    } else if f < 3.5 {
        2.0
    } else if f < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn tick_label(v: f64, step: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.abs() >= 1e5 || v.abs() < 1e-3 {
        return format!("{v:.2e}");
    }
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    format!("{v:.decimals$}")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) =
        values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if lo == hi {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}

fn draw_panel(out: &mut String, panel: &Panel, ox: f64) {
    let all = || panel.series.iter().flat_map(|s| s.points.iter());
    let (x0, x1) = range(all().map(|p| p.0));
    let (y0, y1) = range(all().map(|p| p.1).chain([0.0]));
    let (pw, ph) = (PANEL_W - MARGIN_L - MARGIN_R, PANEL_H - MARGIN_T - MARGIN_B);
    let sx = |x: f64| ox + MARGIN_L + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| MARGIN_T + ph - (y - y0) / (y1 - y0) * ph;

    let _ = writeln!(out, r#"<g font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(
        out,
        r#"<rect x="{:.2}" y="{MARGIN_T:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="black"/>"#,
        ox + MARGIN_L
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="20" text-anchor="middle" font-size="13">{}</text>"#,
        ox + MARGIN_L + pw / 2.0,
        escape(&panel.title)
    );
    for (lo, hi, vertical) in [(x0, x1, true), (y0, y1, false)] {
        let step = tick_step(hi - lo);
        let mut t = (lo / step).ceil() * step;
        while t <= hi + step * 1e-9 {
            let label = tick_label(t, step);
            if vertical {
                let x = sx(t);
                let _ = writeln!(
                    out,
                    r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
                    MARGIN_T + ph,
                    MARGIN_T + ph + 4.0
                );
                let _ = writeln!(
                    out,
                    r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#,
                    MARGIN_T + ph + 16.0
                );
            } else {
                let y = sy(t);
                let _ = writeln!(
                    out,
                    r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black"/>"#,
                    ox + MARGIN_L - 4.0,
                    ox + MARGIN_L
                );
                let _ = writeln!(
                    out,
                    r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#,
                    ox + MARGIN_L - 6.0,
                    y + 4.0
                );
            }
            t += step;
        }
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        ox + MARGIN_L + pw / 2.0,
        PANEL_H - 12.0,
        escape(&panel.x_label)
    );
    let (lx, ly) = (ox + 14.0, MARGIN_T + ph / 2.0);
    let _ = writeln!(
        out,
        r#"<text x="{lx:.2}" y="{ly:.2}" text-anchor="middle" transform="rotate(-90 {lx:.2} {ly:.2})">{}</text>"#,
        escape(&panel.y_label)
    );
    for (k, s) in panel.series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<(f64, f64)> =
            s.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()).map(|&(x, y)| (sx(x), sy(y))).collect();
        match s.style {
            Style::Scatter => {
                for (x, y) in &pts {
                    let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{color}"/>"#);
                }
            }
            Style::Line => {
                let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(
                    out,
                    r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                    path.join(" ")
                );
            }
        }
        let ly = MARGIN_T + 14.0 + 14.0 * k as f64;
        let lx = ox + PANEL_W - MARGIN_R - 8.0;
        let _ = writeln!(
            out,
            r#"<text x="{lx:.2}" y="{ly:.2}" text-anchor="end" fill="{color}">{}</text>"#,
            escape(&s.label)
        );
    }
    out.push_str("</g>\n");
}

/// Panels side by side. `metadata` lands in a `<metadata>` element.
pub fn render(panels: &[Panel], metadata: &str) -> String {
    let width = PANEL_W * panels.len().max(1) as f64;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{PANEL_H:.0}" viewBox="0 0 {width:.0} {PANEL_H:.0}">"#
    );
    let _ = writeln!(out, "<metadata>{}</metadata>", escape(metadata));
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (k, panel) in panels.iter().enumerate() {
        draw_panel(&mut out, panel, PANEL_W * k as f64);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_are_round() {
        assert_eq!(tick_step(10.0), 2.0);
        assert_eq!(tick_step(1.0), 0.2);
        assert_eq!(tick_step(700.0), 100.0);
        assert_eq!(tick_label(0.4, 0.2), "0.4");
        assert_eq!(tick_label(3.0e7, 1e7), "3.00e7");
    }

    #[test]
    fn renders_escaped_document() {
        let panel = Panel {
            title: "a < b".into(),
            x_label: "p".into(),
            y_label: "k_{p,q}".into(),
            series: vec![Series { label: "q=1".into(), style: Style::Scatter, points: vec![(0.0, 1.0), (1.0, 2.0)] }],
        };
        let svg = render(&[panel.clone(), panel], "seed=0 & more");
        assert!(svg.contains("a &lt; b"));
        assert!(svg.contains("seed=0 &amp; more"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 4);
    }
}
