//! Minimal SVG output for rate sweeps and fields.

use std::fmt::Write as _;

use crate::diagnostics::RateReport;
use crate::grid::Field;

const W: f64 = 480.0;
const H: f64 = 360.0;
const PAD: f64 = 50.0;

/// Log-log plot of error against epsilon with the fitted line and a slope-1/2 guide.
pub fn rate_plot(report: &RateReport) -> String {
    let pts: Vec<(f64, f64)> = report.pairs.iter().map(|&(e, r)| (e.log10(), r.log10())).collect();
    let (mut x0, mut x1) = bounds(pts.iter().map(|p| p.0));
    let (mut y0, mut y1) = bounds(pts.iter().map(|p| p.1));
    widen(&mut x0, &mut x1);
    widen(&mut y0, &mut y1);
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut svg = header();
    axes(&mut svg);
    let ln10 = std::f64::consts::LN_10;
    let fit = |x: f64| (report.intercept + report.slope * x * ln10) / ln10;
    writeln!(
        svg,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#1f77b4"/>"##,
        sx(x0),
        sy(fit(x0)),
        sx(x1),
        sy(fit(x1))
    )
    .unwrap();
    let (gx, gy) = pts[pts.len() - 1];
    writeln!(
        svg,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
        sx(x0),
        sy(gy + 0.5 * (x0 - gx)),
        sx(x1),
        sy(gy + 0.5 * (x1 - gx))
    )
    .unwrap();
    for &(x, y) in &pts {
        writeln!(
            svg,
            r##"<circle cx="{:.2}" cy="{:.2}" r="4" fill="#d62728"/>"##,
            sx(x),
            sy(y)
        )
        .unwrap();
    }
    writeln!(
        svg,
        r#"<text x="{PAD}" y="20" font-size="13">slope {:.3}, r2 {:.4} (dashed: slope 0.5)</text>"#,
        report.slope, report.r_squared
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">log10 eps</text>"#,
        W / 2.0,
        H - 15.0
    )
    .unwrap();
    svg.push_str("</svg>\n");
    svg
}

/// Grayscale heatmap, block-averaged down to at most 200 cells per side.
pub fn field_heatmap(field: &Field) -> String {
    let g = &field.grid;
    let bx = g.nx.div_ceil(200);
    let by = g.ny.div_ceil(200);
    let (cx, cy) = (g.nx.div_ceil(bx), g.ny.div_ceil(by));
    let mut cells = vec![0.0; cx * cy];
    for (cj, chunk) in cells.chunks_mut(cx).enumerate() {
        for (ci, cell) in chunk.iter_mut().enumerate() {
            let mut sum = 0.0;
            let mut n = 0;
            for j in cj * by..((cj + 1) * by).min(g.ny) {
                for i in ci * bx..((ci + 1) * bx).min(g.nx) {
                    sum += field.get(i, j);
                    n += 1;
                }
            }
            *cell = sum / n as f64;
        }
    }
    let (lo, hi) = (field.min(), field.max());
    let span = if hi > lo { hi - lo } else { 1.0 };
    let (pw, ph) = ((W - 2.0 * PAD) / cx as f64, (H - 2.0 * PAD) / cy as f64);

    let mut svg = header();
    for (cj, chunk) in cells.chunks(cx).enumerate() {
        for (ci, v) in chunk.iter().enumerate() {
            let level = (255.0 * (v - lo) / span).round() as u8;
            writeln!(
                svg,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="rgb({level},{level},{level})"/>"#,
                PAD + ci as f64 * pw,
                H - PAD - (cj + 1) as f64 * ph,
                pw + 0.05,
                ph + 0.05
            )
            .unwrap();
        }
    }
    axes(&mut svg);
    writeln!(
        svg,
        r#"<text x="{PAD}" y="20" font-size="13">t={} min={:.4} max={:.4} (x right, y up)</text>"#,
        field.time, lo, hi
    )
    .unwrap();
    svg.push_str("</svg>\n");
    svg
}

fn header() -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

fn axes(svg: &mut String) {
    writeln!(
        svg,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    )
    .unwrap();
}

fn bounds(it: impl Iterator<Item = f64>) -> (f64, f64) {
    it.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)))
}

fn widen(lo: &mut f64, hi: &mut f64) {
    let pad = 0.1 * (*hi - *lo).max(0.1);
    *lo -= pad;
    *hi += pad;
}
