//! Poincaré-disk SVG figures. Geodesics are circular arcs orthogonal to the
//! boundary circle, so angles on the page are true angles.

use std::fmt::Write as _;

use billiard_core::hyperbolic::{HGeodesic, HPoint};

const SIZE: f64 = 800.0;
const RADIUS: f64 = 380.0;

/// Page coordinates of a Poincaré-disk point (y axis flipped).
fn page(p: [f64; 2]) -> [f64; 2] {
    [SIZE / 2.0 + RADIUS * p[0], SIZE / 2.0 - RADIUS * p[1]]
}

/// SVG path data for the geodesic arc from `a` to `b` (disk coordinates,
/// either may be ideal).
fn arc(a: [f64; 2], b: [f64; 2]) -> String {
    let pa = page(a);
    format!("M {:.3} {:.3} {}", pa[0], pa[1], arc_tail(a, b))
}

/// The drawing command of [`arc`] without its initial move.
fn arc_tail(a: [f64; 2], b: [f64; 2]) -> String {
    // Centre c of the orthogonal circle: c·a = (|a|²+1)/2, c·b = (|b|²+1)/2.
    let ra = (a[0] * a[0] + a[1] * a[1] + 1.0) / 2.0;
    let rb = (b[0] * b[0] + b[1] * b[1] + 1.0) / 2.0;
    let det = a[0] * b[1] - a[1] * b[0];
    let (pa, pb) = (page(a), page(b));
    let scale = (a[0] - b[0]).hypot(a[1] - b[1]).max(1e-12);
    if det.abs() < 1e-9 * scale {
        return format!("L {:.3} {:.3}", pb[0], pb[1]);
    }
    let c = [(ra * b[1] - rb * a[1]) / det, (a[0] * rb - b[0] * ra) / det];
    let r = ((c[0] - a[0]).powi(2) + (c[1] - a[1]).powi(2)).sqrt() * RADIUS;
    let pc = page(c);
    let cross = (pa[0] - pc[0]) * (pb[1] - pc[1]) - (pa[1] - pc[1]) * (pb[0] - pc[0]);
    let sweep = if cross > 0.0 { 1 } else { 0 };
    format!("A {r:.3} {r:.3} 0 0 {sweep} {:.3} {:.3}", pb[0], pb[1])
}

pub struct Figure {
    body: String,
}

impl Default for Figure {
    fn default() -> Self {
        Self::new()
    }
}

impl Figure {
    pub fn new() -> Figure {
        let mut body = String::new();
        let _ = write!(
            body,
            r##"<circle cx="{c}" cy="{c}" r="{RADIUS}" fill="#f7f7f2" stroke="#333" stroke-width="1.5"/>"##,
            c = SIZE / 2.0
        );
        Figure { body }
    }

    pub fn polygon(&mut self, vertices: &[HPoint], stroke: &str, fill: &str, width: f64) {
        let n = vertices.len();
        let Some(first) = vertices.first() else { return };
        let p0 = page(first.to_poincare());
        let mut d = format!("M {:.3} {:.3}", p0[0], p0[1]);
        for k in 0..n {
            d.push(' ');
            d.push_str(&arc_tail(vertices[k].to_poincare(), vertices[(k + 1) % n].to_poincare()));
        }
        d.push_str(" Z");
        let _ = write!(self.body, r#"<path d="{d}" fill="{fill}" stroke="{stroke}" stroke-width="{width}"/>"#);
    }

    pub fn path(&mut self, points: &[HPoint], stroke: &str, width: f64) {
        for w in points.windows(2) {
            let d = arc(w[0].to_poincare(), w[1].to_poincare());
            let _ = write!(self.body, r#"<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#);
        }
    }

    pub fn line(&mut self, g: &HGeodesic, stroke: &str, width: f64) {
        let (a, b) = g.ideal_endpoints();
        // Ideal points coincide in the Klein and Poincaré models.
        let d = arc(a, b);
        let _ = write!(self.body, r#"<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#);
    }

    pub fn dot(&mut self, p: &HPoint, fill: &str) {
        let q = page(p.to_poincare());
        let _ = write!(self.body, r#"<circle cx="{:.3}" cy="{:.3}" r="3" fill="{fill}"/>"#, q[0], q[1]);
    }

    pub fn label(&mut self, p: &HPoint, text: &str) {
        let q = page(p.to_poincare());
        let _ = write!(self.body, r#"<text x="{:.3}" y="{:.3}" font-size="14" font-family="sans-serif">{text}</text>"#, q[0], q[1]);
    }

    pub fn finish(self) -> String {
        format!(
            r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">
{}
</svg>
"#,
            self.body
        )
    }
}
