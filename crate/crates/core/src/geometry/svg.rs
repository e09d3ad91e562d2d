use std::fmt::Write;

use super::strip::UnfoldedStrip;
use crate::mesh::{IntrinsicMesh, Vec2};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 20.0;
const GAP: f64 = 30.0;

/// Renders strips stacked top to bottom, each with its straight segment.
pub fn strips_svg(mesh: &IntrinsicMesh, strips: &[UnfoldedStrip]) -> String {
    let boxes: Vec<(Vec2, Vec2)> = strips.iter().map(|s| bounds(mesh, s)).collect();
    let widest = boxes.iter().map(|(lo, hi)| hi.x - lo.x).fold(1e-12, f64::max);
    let scale = (WIDTH - 2.0 * MARGIN) / widest;
    let mut body = String::new();
    let mut y0 = MARGIN;
    for (strip, (lo, hi)) in strips.iter().zip(&boxes) {
        let map = |p: Vec2| (MARGIN + (p.x - lo.x) * scale, y0 + (hi.y - p.y) * scale);
        writeln!(body, "<g>").unwrap();
        for i in 0..strip.faces.len() {
            let c = strip.corners(mesh, i);
            let pts: Vec<String> = c
                .iter()
                .map(|&p| {
                    let (x, y) = map(p);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            writeln!(
                body,
                "<polygon points=\"{}\" fill=\"#eef\" stroke=\"#336\" stroke-width=\"1\"/>",
                pts.join(" ")
            )
            .unwrap();
            let g = (c[0] + c[1] + c[2]) / 3.0;
            let (x, y) = map(g);
            writeln!(
                body,
                "<text x=\"{x:.3}\" y=\"{y:.3}\" font-size=\"10\" text-anchor=\"middle\">{}</text>",
                strip.faces[i]
            )
            .unwrap();
        }
        let (x1, y1) = map(strip.start);
        let (x2, y2) = map(strip.end);
        writeln!(
            body,
            "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"#c00\" stroke-width=\"2\"/>"
        )
        .unwrap();
        writeln!(body, "</g>").unwrap();
        y0 += (hi.y - lo.y) * scale + GAP;
    }
    let height = y0 - GAP + MARGIN;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {WIDTH:.0} {height:.3}\">\n{body}</svg>\n"
    )
}

fn bounds(mesh: &IntrinsicMesh, strip: &UnfoldedStrip) -> (Vec2, Vec2) {
    let mut lo = Vec2::repeat(f64::INFINITY);
    let mut hi = Vec2::repeat(f64::NEG_INFINITY);
    for i in 0..strip.faces.len() {
        for p in strip.corners(mesh, i) {
            lo = lo.inf(&p);
            hi = hi.sup(&p);
        }
    }
    (lo, hi)
}
