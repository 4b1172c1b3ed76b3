//! Minimal SVG scatter plot: one circle per point, colored along a ramp.

use std::fmt::Write;

use crate::datasets::PointCloud;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 640.0;
const MARGIN: f64 = 48.0;
const RADIUS: f64 = 3.0;

// viridis-like ramp stops
const RAMP: [(f64, [u8; 3]); 5] = [
    (0.0, [68, 1, 84]),
    (0.25, [59, 82, 139]),
    (0.5, [33, 145, 140]),
    (0.75, [94, 201, 98]),
    (1.0, [253, 231, 37]),
];

fn ramp(t: f64) -> [u8; 3] {
    let t = t.clamp(0.0, 1.0);
    for w in RAMP.windows(2) {
        let ((t0, c0), (t1, c1)) = (w[0], w[1]);
        if t <= t1 {
            let f = (t - t0) / (t1 - t0);
            let mix = |a: u8, b: u8| (a as f64 + f * (b as f64 - a as f64)).round() as u8;
            return [mix(c0[0], c1[0]), mix(c0[1], c1[1]), mix(c0[2], c1[2])];
        }
    }
    RAMP[RAMP.len() - 1].1
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}

/// Scatter of the first two coordinates (a 1-D cloud is drawn on a line).
/// Points are colored by the cloud's color field, or by index when absent.
pub fn scatter(cloud: &PointCloud, title: &str) -> String {
    let n = cloud.len();
    let x = |i: usize| cloud.point(i)[0];
    let y = |i: usize| if cloud.dim() > 1 { cloud.point(i)[1] } else { 0.0 };
    let (x0, x1) = extent((0..n).map(x));
    let (y0, y1) = extent((0..n).map(y));
    let shade: Vec<f64> = match cloud.color() {
        Some(c) => c.to_vec(),
        None => (0..n).map(|i| i as f64).collect(),
    };
    let (c0, c1) = extent(shade.iter().copied());

    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let sx = |v: f64| MARGIN + (v - x0) / (x1 - x0) * plot_w;
    let sy = |v: f64| HEIGHT - MARGIN - (v - y0) / (y1 - y0) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        MARGIN / 2.0,
        escape(title)
    );
    // axes
    let _ = writeln!(
        svg,
        r#"<g stroke="black" stroke-width="1"><line x1="{MARGIN}" y1="{b}" x2="{r}" y2="{b}"/><line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{b}"/></g>"#,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(
        svg,
        r#"<g font-family="sans-serif" font-size="11"><text x="{MARGIN}" y="{ty}">{x0:.3}</text><text x="{r}" y="{ty}" text-anchor="end">{x1:.3}</text><text x="{lx}" y="{b}" text-anchor="end">{y0:.3}</text><text x="{lx}" y="{top}" text-anchor="end">{y1:.3}</text></g>"#,
        ty = HEIGHT - MARGIN + 16.0,
        r = WIDTH - MARGIN,
        lx = MARGIN - 4.0,
        b = HEIGHT - MARGIN,
        top = MARGIN + 4.0,
    );

    let _ = writeln!(svg, r#"<g class="points" stroke="none">"#);
    for (i, &t) in shade.iter().enumerate() {
        let [r, g, b] = ramp((t - c0) / (c1 - c0));
        let _ = writeln!(
            svg,
            r##"<circle cx="{:.3}" cy="{:.3}" r="{RADIUS}" fill="#{r:02x}{g:02x}{b:02x}"><title>{}</title></circle>"##,
            sx(x(i)),
            sy(y(i)),
            escape(&cloud.label(i))
        );
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str("</svg>\n");
    svg
}
