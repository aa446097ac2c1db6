//! Minimal standalone SVG scatter plots.

use std::fmt::Write;

const PANEL_W: f64 = 480.0;
const PANEL_H: f64 = 360.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 36.0;
const MARGIN_B: f64 = 52.0;
const LEGEND_W: f64 = 110.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

impl Panel {
    /// Points that survive the axis transforms (finite, positive on log axes).
    fn visible(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.series.iter().enumerate().flat_map(move |(i, s)| {
            s.points.iter().filter_map(move |&(x, y)| {
                let x = axis_value(x, self.log_x)?;
                let y = axis_value(y, self.log_y)?;
                Some((i, x, y))
            })
        })
    }

    pub fn point_count(&self) -> usize {
        self.visible().count()
    }
}

fn axis_value(v: f64, log: bool) -> Option<f64> {
    let v = if log {
        if v > 0.0 {
            v.log10()
        } else {
            return None;
        }
    } else {
        v
    };
    v.is_finite().then_some(v)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Range padded by 5%, widened when degenerate.
fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi - lo <= 1e-12 * lo.abs().max(1.0) {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn ticks(lo: f64, hi: f64, log: bool) -> Vec<f64> {
    if log {
        let (a, b) = (lo.ceil() as i64, hi.floor() as i64);
        if b >= a {
            let stride = ((b - a) / 6 + 1).max(1);
            return (a..=b).step_by(stride as usize).map(|e| e as f64).collect();
        }
    }
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * step {
        out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    out
}

fn tick_label(v: f64, log: bool) -> String {
    if log {
        format!("1e{}", v.round() as i64)
    } else if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn draw_panel(svg: &mut String, panel: &Panel, x0: f64) {
    let legend = panel.series.len() > 1;
    let plot_w = PANEL_W - MARGIN_L - MARGIN_R - if legend { LEGEND_W } else { 0.0 };
    let plot_h = PANEL_H - MARGIN_T - MARGIN_B;
    let (left, top) = (x0 + MARGIN_L, MARGIN_T);
    let (xlo, xhi) = range(panel.visible().map(|p| p.1));
    let (ylo, yhi) = range(panel.visible().map(|p| p.2));
    let sx = |x: f64| left + (x - xlo) / (xhi - xlo) * plot_w;
    let sy = |y: f64| top + plot_h - (y - ylo) / (yhi - ylo) * plot_h;

    let _ = writeln!(
        svg,
        r##"<rect x="{left:.1}" y="{top:.1}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="#333"/>"##
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        left + plot_w / 2.0,
        escape(&panel.title)
    );
    for t in ticks(xlo, xhi, panel.log_x) {
        let x = sx(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="#333"/><text x="{x:.1}" y="{:.1}" text-anchor="middle" font-size="11">{}</text>"##,
            top + plot_h,
            top + plot_h + 5.0,
            top + plot_h + 18.0,
            tick_label(t, panel.log_x)
        );
    }
    for t in ticks(ylo, yhi, panel.log_y) {
        let y = sy(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.1}" y1="{y:.1}" x2="{left:.1}" y2="{y:.1}" stroke="#333"/><text x="{:.1}" y="{:.1}" text-anchor="end" font-size="11">{}</text>"##,
            left - 5.0,
            left - 8.0,
            y + 4.0,
            tick_label(t, panel.log_y)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="13">{}</text>"#,
        left + plot_w / 2.0,
        PANEL_H - 12.0,
        escape(&panel.x_label)
    );
    let (lx, ly) = (x0 + 18.0, top + plot_h / 2.0);
    let _ = writeln!(
        svg,
        r#"<text x="{lx:.1}" y="{ly:.1}" text-anchor="middle" font-size="13" transform="rotate(-90 {lx:.1} {ly:.1})">{}</text>"#,
        escape(&panel.y_label)
    );
    for (i, x, y) in panel.visible() {
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#,
            sx(x),
            sy(y),
            PALETTE[i % PALETTE.len()]
        );
    }
    if legend {
        let lx = left + plot_w + 12.0;
        for (i, s) in panel.series.iter().enumerate() {
            let y = top + 12.0 + 16.0 * i as f64;
            let _ = writeln!(
                svg,
                r#"<circle cx="{lx:.1}" cy="{:.1}" r="4" fill="{}"/><text x="{:.1}" y="{:.1}" font-size="11">{}</text>"#,
                y,
                PALETTE[i % PALETTE.len()],
                lx + 9.0,
                y + 4.0,
                escape(&s.label)
            );
        }
    }
}

/// Renders panels side by side into one document.
pub fn render(panels: &[Panel]) -> String {
    let width = PANEL_W * panels.len().max(1) as f64;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{PANEL_H:.0}" viewBox="0 0 {width:.0} {PANEL_H:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, panel) in panels.iter().enumerate() {
        let _ = writeln!(svg, "<g>");
        draw_panel(&mut svg, panel, PANEL_W * i as f64);
        let _ = writeln!(svg, "</g>");
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn panel(points: Vec<(f64, f64)>, log_x: bool) -> Panel {
        Panel {
            title: "t".into(),
            x_label: "x & y".into(),
            y_label: "y".into(),
            log_x,
            log_y: false,
            series: vec![Series {
                label: "a".into(),
                points,
            }],
        }
    }

    #[test]
    fn log_axis_drops_non_positive() {
        let p = panel(vec![(0.0, 1.0), (-1.0, 1.0), (1e-3, 2.0), (f64::NAN, 1.0)], true);
        assert_eq!(p.point_count(), 1);
    }

    #[test]
    fn nice_linear_ticks() {
        let t = ticks(0.0, 1.0, false);
        assert_eq!(t.len(), 6);
        assert!(t
            .iter()
            .zip([0.0, 0.2, 0.4, 0.6, 0.8, 1.0])
            .all(|(a, b)| (a - b).abs() < 1e-12));
        assert_eq!(ticks(-5.2, -0.8, true), vec![-5.0, -4.0, -3.0, -2.0, -1.0]);
    }

    #[test]
    fn document_is_closed_and_escaped() {
        let svg = render(&[panel(vec![(1.0, 1.0), (2.0, 3.0)], false)]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("x &amp; y"));
        assert_eq!(svg.matches("<circle").count(), 2);
    }
}
