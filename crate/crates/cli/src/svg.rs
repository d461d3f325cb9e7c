//! Minimal SVG charts. Coordinates are printed with two decimals so output
//! is byte-stable.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const LABEL_W: f64 = 160.0;
const VALUE_W: f64 = 90.0;
const ROW_H: f64 = 24.0;
const TOP: f64 = 40.0;
const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#9c755f",
];

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn header(out: &mut String, w: f64, h: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        w / 2.0,
        esc(title)
    );
}

/// Horizontal bars in the given order, one row per (label, value).
pub fn bar_chart(title: &str, axis_label: &str, bars: &[(String, f64)]) -> String {
    let height = TOP + ROW_H * bars.len() as f64 + 50.0;
    let plot_w = WIDTH - LABEL_W - VALUE_W;
    let lo = bars.iter().map(|b| b.1).fold(0.0, f64::min);
    let hi = bars.iter().map(|b| b.1).fold(0.0, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let x_of = |v: f64| LABEL_W + (v - lo) / span * plot_w;

    let mut out = String::new();
    header(&mut out, WIDTH, height, title);
    for (i, (label, value)) in bars.iter().enumerate() {
        let y = TOP + ROW_H * i as f64;
        let (x0, x1) = (x_of(0.0), x_of(*value));
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LABEL_W - 6.0,
            y + ROW_H * 0.65,
            esc(label)
        );
        let _ = writeln!(
            out,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
            x0.min(x1),
            y + 3.0,
            (x1 - x0).abs(),
            ROW_H - 6.0,
            PALETTE[0]
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}">{:.4}</text>"#,
            x0.max(x1) + 4.0,
            y + ROW_H * 0.65,
            value
        );
    }
    let axis_y = TOP + ROW_H * bars.len() as f64 + 4.0;
    let _ = writeln!(
        out,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#333333"/>"##,
        LABEL_W,
        axis_y,
        LABEL_W + plot_w,
        axis_y
    );
    let _ = writeln!(
        out,
        r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{axis_y:.2}" stroke="#333333"/>"##,
        TOP,
        x = x_of(0.0)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LABEL_W + plot_w / 2.0,
        axis_y + 30.0,
        esc(axis_label)
    );
    out.push_str("</svg>\n");
    out
}

pub struct ScatterPoint<'a> {
    pub label: &'a str,
    pub x: f64,
    pub y: f64,
    pub group: usize,
}

pub struct Arrow<'a> {
    pub label: &'a str,
    pub x: f64,
    pub y: f64,
}

/// Labelled points coloured by group, plus arrows from the origin.
/// Arrows are rescaled to reach 80% of the point extent.
pub fn biplot(title: &str, points: &[ScatterPoint<'_>], arrows: &[Arrow<'_>], x_label: &str, y_label: &str) -> String {
    let size = 560.0;
    let margin = 60.0;
    let extent = points
        .iter()
        .flat_map(|p| [p.x.abs(), p.y.abs()])
        .fold(0.0, f64::max)
        .max(1e-9)
        * 1.15;
    let arrow_len = arrows.iter().map(|a| a.x.hypot(a.y)).fold(0.0, f64::max);
    let arrow_scale = if arrow_len > 0.0 { 0.8 * extent / arrow_len } else { 0.0 };
    let half = size / 2.0;
    let px = |x: f64| margin + half + x / extent * half;
    let py = |y: f64| margin + half - y / extent * half;
    let total = size + 2.0 * margin;

    let mut out = String::new();
    header(&mut out, total, total, title);
    let _ = writeln!(
        out,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#999999"/>"##,
        margin,
        py(0.0),
        margin + size,
        py(0.0)
    );
    let _ = writeln!(
        out,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#999999"/>"##,
        px(0.0),
        margin,
        px(0.0),
        margin + size
    );
    for a in arrows {
        let (x, y) = (px(a.x * arrow_scale), py(a.y * arrow_scale));
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{x:.2}" y2="{y:.2}" stroke="#c0392b"/>"##,
            px(0.0),
            py(0.0)
        );
        let _ = writeln!(
            out,
            r##"<text x="{x:.2}" y="{:.2}" fill="#c0392b" font-size="11">{}</text>"##,
            y - 4.0,
            esc(a.label)
        );
    }
    for p in points {
        let (x, y) = (px(p.x), py(p.y));
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="{}"/>"#,
            PALETTE[p.group % PALETTE.len()]
        );
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 7.0, y + 4.0, esc(p.label));
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        margin + half,
        total - 15.0,
        esc(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="15" y="{:.2}" text-anchor="middle" transform="rotate(-90 15 {:.2})">{}</text>"#,
        margin + half,
        margin + half,
        esc(y_label)
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bars_escape_and_are_stable() {
        let bars = vec![("a<b".to_string(), 2.0), ("c".to_string(), -1.0)];
        let svg = bar_chart("t", "x", &bars);
        assert!(svg.contains("a&lt;b"));
        assert_eq!(svg, bar_chart("t", "x", &bars));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn empty_charts_render() {
        assert!(bar_chart("t", "x", &[]).contains("</svg>"));
        assert!(biplot("t", &[], &[], "x", "y").contains("</svg>"));
    }
}
