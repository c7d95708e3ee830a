//! Minimal static SVG plotting: polyline panels with axes, tick labels,
//! and optional vertical reference lines.  The plots are a visual aid for
//! humans; nothing downstream parses them.

use std::fs::File;
use std::io::{BufWriter, Result, Write};
use std::path::Path;

/// One curve inside a panel.
pub struct Series<'a> {
    pub label: &'a str,
    /// Stroke color, e.g. `#1f77b4`.
    pub color: &'a str,
    pub points: &'a [(f64, f64)],
}

/// One plot panel: a title, one or more curves, and vertical marks (used
/// for the law's segment joins).
pub struct Panel<'a> {
    pub title: &'a str,
    pub series: Vec<Series<'a>>,
    pub marks: &'a [f64],
}

const PLOT_W: f64 = 400.0;
const PLOT_H: f64 = 260.0;
const MARGIN_L: f64 = 56.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 32.0;
const MARGIN_B: f64 = 38.0;
const TICKS: usize = 5;

/// Writes four panels in a 2 x 2 grid.
pub fn write_quad<P: AsRef<Path>>(path: P, panels: &[Panel<'_>; 4]) -> Result<()> {
    let cell_w = PLOT_W + MARGIN_L + MARGIN_R;
    let cell_h = PLOT_H + MARGIN_T + MARGIN_B;
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif">"#,
        2.0 * cell_w,
        2.0 * cell_h
    )?;
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    for (i, panel) in panels.iter().enumerate() {
        let ox = (i % 2) as f64 * cell_w + MARGIN_L;
        let oy = (i / 2) as f64 * cell_h + MARGIN_T;
        draw_panel(&mut out, panel, ox, oy)?;
    }
    writeln!(out, "</svg>")?;
    out.flush()
}

fn draw_panel<W: Write>(out: &mut W, panel: &Panel<'_>, ox: f64, oy: f64) -> Result<()> {
    let (x_lo, x_hi) = bounds(panel, |p| p.0);
    let (mut y_lo, mut y_hi) = bounds(panel, |p| p.1);
    // Pad the value axis so curves do not hug the frame.
    let pad = 0.05 * (y_hi - y_lo).max(1e-12);
    y_lo -= pad;
    y_hi += pad;
    let px = |x: f64| ox + (x - x_lo) / (x_hi - x_lo) * PLOT_W;
    let py = |y: f64| oy + PLOT_H - (y - y_lo) / (y_hi - y_lo) * PLOT_H;

    writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">{}</text>"#,
        ox + PLOT_W / 2.0,
        oy - 12.0,
        panel.title
    )?;
    writeln!(
        out,
        r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#444" stroke-width="1"/>"##,
        ox, oy, PLOT_W, PLOT_H
    )?;

    for k in 0..TICKS {
        let fr = k as f64 / (TICKS - 1) as f64;
        let xv = x_lo + fr * (x_hi - x_lo);
        let yv = y_lo + fr * (y_hi - y_lo);
        writeln!(
            out,
            r##"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="#444" stroke-width="1"/>"##,
            px(xv),
            oy + PLOT_H,
            oy + PLOT_H + 4.0
        )?;
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="10">{}</text>"#,
            px(xv),
            oy + PLOT_H + 16.0,
            tick_label(xv)
        )?;
        writeln!(
            out,
            r##"<line x1="{1:.2}" y1="{0:.2}" x2="{2:.2}" y2="{0:.2}" stroke="#444" stroke-width="1"/>"##,
            py(yv),
            ox - 4.0,
            ox
        )?;
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="10">{}</text>"#,
            ox - 7.0,
            py(yv) + 3.5,
            tick_label(yv)
        )?;
    }

    for &m in panel.marks {
        if m > x_lo && m < x_hi {
            writeln!(
                out,
                r##"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="#999" stroke-width="1" stroke-dasharray="4 3"/>"##,
                px(m),
                oy,
                oy + PLOT_H
            )?;
        }
    }

    for (si, series) in panel.series.iter().enumerate() {
        let pts: Vec<String> = series
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.4" points="{}"/>"#,
            series.color,
            pts.join(" ")
        )?;
        if panel.series.len() > 1 {
            writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="11" fill="{}">{}</text>"#,
                ox + PLOT_W - 8.0,
                oy + 16.0 + 14.0 * si as f64,
                series.color,
                series.label
            )?;
        }
    }
    Ok(())
}

fn bounds(panel: &Panel<'_>, pick: impl Fn(&(f64, f64)) -> f64) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in &panel.series {
        for p in s.points {
            let v = pick(p);
            if v.is_finite() {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
    }
    if !(lo < hi) {
        // Degenerate or empty data: pick a unit window around whatever is
        // there so the panel still renders.
        let c = if lo.is_finite() { lo } else { 0.0 };
        return (c - 0.5, c + 0.5);
    }
    (lo, hi)
}

/// Axis labels rounded to four significant digits.
fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{:.3e}", v).parse().expect("formatted float parses");
    rounded.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tick_labels_are_short() {
        assert_eq!(tick_label(0.0), "0");
        assert_eq!(tick_label(8.0), "8");
        assert_eq!(tick_label(0.27004355743), "0.27");
        assert_eq!(tick_label(1.5081793566822645), "1.508");
    }

    #[test]
    fn quad_layout_renders_all_panels() {
        let pts_a: Vec<(f64, f64)> = (0..50).map(|i| (i as f64, (i as f64).sin())).collect();
        let pts_b: Vec<(f64, f64)> = (0..50).map(|i| (i as f64, (i as f64).cos())).collect();
        let panel = || Panel {
            title: "trig",
            series: vec![
                Series { label: "sin", color: "#1f77b4", points: &pts_a },
                Series { label: "cos", color: "#ff7f0e", points: &pts_b },
            ],
            marks: &[10.0, 20.0],
        };
        let dir = std::env::temp_dir().join("renewal-svg-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("quad.svg");
        write_quad(&path, &[panel(), panel(), panel(), panel()]).unwrap();
        let body = std::fs::read_to_string(&path).unwrap();
        assert!(body.starts_with("<svg"));
        assert!(body.trim_end().ends_with("</svg>"));
        assert_eq!(body.matches("<polyline").count(), 8, "two curves per panel");
        assert_eq!(body.matches("stroke-dasharray").count(), 8, "two marks per panel");
        std::fs::remove_dir_all(&dir).ok();
    }
}
