//! Deterministic SVG funnel plots.
//!
//! Fitted groups draw as open circles, tested groups as filled circles, the
//! model mean as a dashed line, and the prediction limits as continuous
//! curves. Styling is fixed and every coordinate is formatted with two
//! decimals, so output bytes depend only on the inputs.

use std::fmt::Write as _;

use crate::meta::{GroupKappa, MetaModel, PredictionBand};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 48.0;
const MARGIN_BOTTOM: f64 = 64.0;

const BAND_COLOR: &str = "#1f6fb5";
const MEAN_COLOR: &str = "#444444";
const FITTED_COLOR: &str = "#1f6fb5";
const TESTED_COLOR: &str = "#c0392b";

struct Frame {
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, m: f64) -> f64 {
        MARGIN_LEFT + (m / self.x_max) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, kappa: f64) -> f64 {
        let span = self.y_max - self.y_min;
        HEIGHT - MARGIN_BOTTOM - ((kappa - self.y_min) / span) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn nice_step(span: f64, target_ticks: usize) -> f64 {
    let raw = span / target_ticks.max(1) as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let step = if norm <= 1.0 {
        1.0
    } else if norm <= 2.0 {
        2.0
    } else if norm <= 5.0 {
        5.0
    } else {
        10.0
    };
    step * mag
}

fn fmt(v: f64) -> String {
    // normalize negative zero so byte output is stable
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.2}")
}

/// Render a funnel plot. `band` supplies the limit curves (usually built on
/// a log-spaced m grid from the same model), `fitted` the open circles,
/// `tested` the filled circles.
pub fn funnel_svg(
    model: &MetaModel,
    band: &PredictionBand,
    fitted: &[GroupKappa],
    tested: &[GroupKappa],
    title: &str,
) -> String {
    let mut x_max = band.points.last().map(|p| p.m as f64).unwrap_or(1.0);
    for g in fitted.iter().chain(tested) {
        x_max = x_max.max(g.m as f64);
    }
    x_max *= 1.05;

    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for p in &band.points {
        y_min = y_min.min(p.lo);
        y_max = y_max.max(p.hi);
    }
    for g in fitted.iter().chain(tested) {
        y_min = y_min.min(g.kappa);
        y_max = y_max.max(g.kappa);
    }
    if !y_min.is_finite() || !y_max.is_finite() {
        y_min = -1.0;
        y_max = 1.0;
    }
    let pad = ((y_max - y_min) * 0.08).max(0.02);
    let frame = Frame {
        x_max,
        y_min: y_min - pad,
        y_max: y_max + pad,
    };

    let mut s = String::with_capacity(16 * 1024);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        fmt(WIDTH),
        fmt(HEIGHT),
        fmt(WIDTH),
        fmt(HEIGHT)
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#,
        fmt(WIDTH),
        fmt(HEIGHT)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="28" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        fmt(WIDTH / 2.0),
        xml_escape(title)
    );

    // axes
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1"/>"#,
        fmt(x0),
        fmt(y0),
        fmt(x1),
        fmt(y0)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1"/>"#,
        fmt(x0),
        fmt(y0),
        fmt(x0),
        fmt(y1)
    );

    // x ticks
    let x_step = nice_step(frame.x_max, 8);
    let mut m_tick = 0.0;
    while m_tick <= frame.x_max + 1e-9 {
        let px = frame.x(m_tick);
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1"/>"#,
            fmt(px),
            fmt(y0),
            fmt(px),
            fmt(y0 + 6.0)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            fmt(px),
            fmt(y0 + 20.0),
            m_tick as u64
        );
        m_tick += x_step;
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">evaluated products (m)</text>"#,
        fmt((x0 + x1) / 2.0),
        fmt(HEIGHT - 16.0)
    );

    // y ticks
    let y_step = nice_step(frame.y_max - frame.y_min, 8);
    let mut kappa_tick = (frame.y_min / y_step).ceil() * y_step;
    while kappa_tick <= frame.y_max + 1e-9 {
        let py = frame.y(kappa_tick);
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1"/>"#,
            fmt(x0 - 6.0),
            fmt(py),
            fmt(x0),
            fmt(py)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"#,
            fmt(x0 - 10.0),
            fmt(py + 4.0),
            fmt(kappa_tick)
        );
        kappa_tick += y_step;
    }
    let _ = writeln!(
        s,
        r#"<text x="18" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {})">weighted kappa</text>"#,
        fmt((y0 + y1) / 2.0),
        fmt((y0 + y1) / 2.0)
    );

    // prediction limits
    for (pick, label) in [(0usize, "lower"), (1, "upper")] {
        let mut points = String::new();
        for p in &band.points {
            let v = if pick == 0 { p.lo } else { p.hi };
            let _ = write!(points, "{},{} ", fmt(frame.x(p.m as f64)), fmt(frame.y(v)));
        }
        let _ = writeln!(
            s,
            r#"<polyline id="band-{label}" fill="none" stroke="{BAND_COLOR}" stroke-width="1.5" points="{}"/>"#,
            points.trim_end()
        );
    }

    // dashed mean
    let mean_y = frame.y(model.mu_hat);
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{MEAN_COLOR}" stroke-width="1.2" stroke-dasharray="7 5"/>"#,
        fmt(x0),
        fmt(mean_y),
        fmt(x1),
        fmt(mean_y)
    );

    // fitted groups: open circles
    for g in fitted {
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="4" fill="none" stroke="{FITTED_COLOR}" stroke-width="1.5"><title>{}</title></circle>"#,
            fmt(frame.x(g.m as f64)),
            fmt(frame.y(g.kappa)),
            xml_escape(&g.label)
        );
    }

    // tested groups: filled circles with labels
    for g in tested {
        let cx = frame.x(g.m as f64);
        let cy = frame.y(g.kappa);
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="4.5" fill="{TESTED_COLOR}" stroke="none"><title>{}</title></circle>"#,
            fmt(cx),
            fmt(cy),
            xml_escape(&g.label)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" fill="{TESTED_COLOR}">{}</text>"#,
            fmt(cx + 7.0),
            fmt(cy + 4.0),
            xml_escape(&g.label)
        );
    }

    s.push_str("</svg>\n");
    s
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meta::{fit, funnel_points, GroupKappa};

    fn sample_inputs() -> (crate::meta::MetaModel, PredictionBand, Vec<GroupKappa>, Vec<GroupKappa>) {
        let fitted = vec![
            GroupKappa::new("a", 631, 0.3176),
            GroupKappa::new("b", 1412, 0.2302),
            GroupKappa::new("c", 927, 0.2246),
            GroupKappa::new("d", 458, 0.2776),
        ];
        let tested = vec![GroupKappa::new("x", 590, 0.54)];
        let model = fit(&fitted).unwrap();
        let band = funnel_points(&model, &[100, 200, 400, 800, 1600], 0.95).unwrap();
        (model, band, fitted, tested)
    }

    #[test]
    fn render_is_byte_deterministic() {
        let (model, band, fitted, tested) = sample_inputs();
        let a = funnel_svg(&model, &band, &fitted, &tested, "funnel");
        let b = funnel_svg(&model, &band, &fitted, &tested, "funnel");
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.ends_with("</svg>\n"));
    }

    #[test]
    fn render_contains_expected_elements() {
        let (model, band, fitted, tested) = sample_inputs();
        let svg = funnel_svg(&model, &band, &fitted, &tested, "t");
        assert_eq!(svg.matches("<circle").count(), fitted.len() + tested.len());
        assert!(svg.contains("stroke-dasharray"));
        assert!(svg.contains("band-lower"));
        assert!(svg.contains("band-upper"));
        assert!(svg.contains("fill=\"none\" stroke=\"#1f6fb5\""));
        assert!(svg.contains("fill=\"#c0392b\""));
    }

    #[test]
    fn escapes_labels() {
        let (model, band, _, _) = sample_inputs();
        let fitted = vec![GroupKappa::new("a & b <c>", 631, 0.3)];
        let svg = funnel_svg(&model, &band, &fitted, &[], "x & y");
        assert!(svg.contains("a &amp; b &lt;c&gt;"));
        assert!(!svg.contains("a & b <c>"));
    }
}
