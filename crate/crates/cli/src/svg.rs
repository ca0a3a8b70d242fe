//! Deterministic SVG line plots and heatmaps.
//!
//! Coordinates are printed with fixed precision and nothing depends on the
//! clock or on hash order, so equal inputs give equal bytes.

use std::fmt::Write as _;

use tcm3_core::QGrid;

use crate::series::Series;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 420.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 150.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;
const COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RenderError {
    #[error("nothing to plot: series is empty")]
    EmptySeries,
    #[error("series has no column {0:?}")]
    MissingColumn(String),
    #[error("grid has no points")]
    EmptyGrid,
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Tick positions with a 1-2-5 spacing covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{:.3}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

/// Line plot of `columns` against the `tau` column.
pub fn render_series(series: &Series, columns: &[&str], title: &str) -> Result<String, RenderError> {
    if series.is_empty() || columns.is_empty() {
        return Err(RenderError::EmptySeries);
    }
    let tau = series.column("tau").ok_or_else(|| RenderError::MissingColumn("tau".into()))?;
    let data: Vec<(&str, Vec<f64>)> = columns
        .iter()
        .map(|c| series.column(c).map(|v| (*c, v)).ok_or_else(|| RenderError::MissingColumn(c.to_string())))
        .collect::<Result<_, _>>()?;

    let (x0, mut x1) = (tau[0], tau[tau.len() - 1]);
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    let finite = data.iter().flat_map(|(_, v)| v.iter().copied()).filter(|v| v.is_finite());
    let (mut y0, mut y1) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !y0.is_finite() {
        (y0, y1) = (-1.0, 1.0);
    }
    let pad = if y1 > y0 { 0.05 * (y1 - y0) } else { 0.5 };
    let (y0, y1) = (y0 - pad, y1 + pad);

    let pw = WIDTH - MARGIN_L - MARGIN_R;
    let ph = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| MARGIN_T + (y1 - y) / (y1 - y0) * ph;

    let mut out = String::new();
    header(&mut out, title);
    let _ = writeln!(
        out,
        r##"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw:.1}" height="{ph:.1}" fill="none" stroke="#444"/>"##
    );
    for t in ticks(x0, x1) {
        let x = sx(t);
        let _ = writeln!(
            out,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#444"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            MARGIN_T + ph,
            MARGIN_T + ph + 5.0,
            MARGIN_T + ph + 19.0,
            tick_label(t)
        );
    }
    for t in ticks(y0, y1) {
        let y = sy(t);
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN_L}" y2="{y:.2}" stroke="#444"/><line x1="{MARGIN_L}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            MARGIN_L - 5.0,
            MARGIN_L + pw,
            MARGIN_L - 8.0,
            y + 4.0,
            tick_label(t)
        );
    }
    let _ =
        writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">τ</text>"#, MARGIN_L + pw / 2.0, HEIGHT - 10.0);

    for (k, (name, values)) in data.iter().enumerate() {
        let colour = COLOURS[k % COLOURS.len()];
        out.push_str(r#"<polyline fill="none" stroke-width="1" stroke=""#);
        out.push_str(colour);
        out.push_str(r#"" points=""#);
        let mut first = true;
        for (t, v) in tau.iter().zip(values) {
            if !v.is_finite() {
                continue;
            }
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{:.2},{:.2}", sx(*t), sy(*v));
        }
        out.push_str("\"/>\n");
        let ly = MARGIN_T + 10.0 + 20.0 * k as f64;
        let lx = MARGIN_L + pw + 15.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{colour}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Grayscale heatmap of a Q grid, white at zero and black at the grid
/// maximum. Runs of equal shade along a row share one rectangle.
pub fn render_grid(grid: &QGrid, title: &str) -> Result<String, RenderError> {
    if grid.nx == 0 || grid.ny == 0 || grid.values.is_empty() {
        return Err(RenderError::EmptyGrid);
    }
    let max = grid.max();
    let side = HEIGHT - MARGIN_T - MARGIN_B;
    let (cw, ch) = (side / grid.nx as f64, side / grid.ny as f64);
    let left = (WIDTH - side) / 2.0;
    let shade = |v: f64| -> u8 {
        if max > 0.0 {
            255 - ((v / max).clamp(0.0, 1.0) * 255.0).round() as u8
        } else {
            255
        }
    };

    let mut out = String::new();
    header(&mut out, title);
    let _ = writeln!(out, r#"<g shape-rendering="crispEdges">"#);
    for iy in 0..grid.ny {
        // Im β grows upwards
        let y = MARGIN_T + (grid.ny - 1 - iy) as f64 * ch;
        let mut ix = 0;
        while ix < grid.nx {
            let s = shade(grid.at(ix, iy));
            let mut end = ix + 1;
            while end < grid.nx && shade(grid.at(end, iy)) == s {
                end += 1;
            }
            if s != 255 {
                let _ = writeln!(
                    out,
                    r#"<rect x="{:.2}" y="{y:.2}" width="{:.2}" height="{ch:.2}" fill="rgb({s},{s},{s})"/>"#,
                    left + ix as f64 * cw,
                    (end - ix) as f64 * cw
                );
            }
            ix = end;
        }
    }
    out.push_str("</g>\n");
    let w = &grid.window;
    let _ = writeln!(
        out,
        r##"<rect x="{left:.2}" y="{MARGIN_T}" width="{side:.2}" height="{side:.2}" fill="none" stroke="#444"/>"##
    );
    let bottom = MARGIN_T + side;
    let _ = writeln!(
        out,
        r#"<text x="{left:.2}" y="{:.2}" text-anchor="start">{}</text><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
        bottom + 18.0,
        tick_label(w.re_min),
        left + side,
        bottom + 18.0,
        tick_label(w.re_max)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
        left - 6.0,
        bottom,
        tick_label(w.im_min),
        left - 6.0,
        MARGIN_T + 10.0,
        tick_label(w.im_max)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Re β</text><text x="{:.2}" y="{:.2}" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">Im β</text>"#,
        left + side / 2.0,
        bottom + 32.0,
        left - 40.0,
        MARGIN_T + side / 2.0,
        left - 40.0,
        MARGIN_T + side / 2.0
    );
    let _ =
        writeln!(out, r#"<text x="{:.2}" y="{:.2}">max Q = {:.4}</text>"#, left + side + 15.0, MARGIN_T + 14.0, max);
    out.push_str("</svg>\n");
    Ok(out)
}
