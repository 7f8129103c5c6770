//! Minimal SVG writer: `log |t|` against the potential, with the per-ring
//! minimum and maximum drawn as envelopes.

use std::fmt::Write;

use degen_core::Result;

use crate::scan::{rings, ScanRow};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 60.0;

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let sx = MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - 2.0 * MARGIN);
        let sy = HEIGHT - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - 2.0 * MARGIN);
        (sx, sy)
    }
}

fn span(v: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = v.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

fn polyline(frame: &Frame, pts: &[(f64, f64)], colour: &str) -> String {
    let coords: Vec<String> = pts
        .iter()
        .map(|&(x, y)| {
            let (a, b) = frame.map(x, y);
            format!("{a:.2},{b:.2}")
        })
        .collect();
    format!("<polyline fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.5\" points=\"{}\"/>\n", coords.join(" "))
}

pub fn render_scan(rows: &[ScanRow]) -> Result<String> {
    let mut points = Vec::with_capacity(rows.len());
    for r in rows {
        points.push((r.log_abs_t()?, r.potential_f64()?));
    }
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for ring in rings(rows) {
        let x = ring[0].log_abs_t()?;
        let mut vals = Vec::with_capacity(ring.len());
        for r in ring {
            vals.push(r.potential_f64()?);
        }
        lower.push((x, vals.iter().cloned().fold(f64::INFINITY, f64::min)));
        upper.push((x, vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max)));
    }
    let frame = Frame { x: span(points.iter().map(|p| p.0)), y: span(points.iter().map(|p| p.1)) };

    let mut s = String::new();
    let _ = writeln!(s, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">");
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let (x0, y0) = (MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(s, "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{}\" y2=\"{y0}\" stroke=\"black\"/>", WIDTH - MARGIN);
    let _ = writeln!(s, "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{MARGIN}\" stroke=\"black\"/>");
    let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\">log |t|</text>", WIDTH / 2.0, HEIGHT - 15.0);
    let _ = writeln!(s, "<text x=\"15\" y=\"{}\" font-size=\"14\" transform=\"rotate(-90 15 {})\">potential</text>", HEIGHT / 2.0, HEIGHT / 2.0);
    for (label, v, anchor) in [(frame.x.0, frame.x.0, "start"), (frame.x.1, frame.x.1, "end")] {
        let (px, _) = frame.map(v, frame.y.0);
        let _ = writeln!(s, "<text x=\"{px:.2}\" y=\"{}\" text-anchor=\"{anchor}\" font-size=\"11\">{label:.3}</text>", y0 + 15.0);
    }
    for v in [frame.y.0, frame.y.1] {
        let (_, py) = frame.map(frame.x.0, v);
        let _ = writeln!(s, "<text x=\"{}\" y=\"{py:.2}\" text-anchor=\"end\" font-size=\"11\">{v:.3}</text>", x0 - 5.0);
    }
    s.push_str(&polyline(&frame, &lower, "#1f77b4"));
    s.push_str(&polyline(&frame, &upper, "#d62728"));
    for &(x, y) in &points {
        let (a, b) = frame.map(x, y);
        let _ = writeln!(s, "<circle cx=\"{a:.2}\" cy=\"{b:.2}\" r=\"2\" fill=\"#333\"/>");
    }
    s.push_str("</svg>\n");
    Ok(s)
}
