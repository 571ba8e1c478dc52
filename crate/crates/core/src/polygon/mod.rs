//! Labeled compact hyperbolic polygons.
//!
//! Vertices are stored counterclockwise. With 0-based indices, side `k`
//! joins vertex `k` to vertex `k+1` and carries the label `k+1`; `angles[k]`
//! is the interior angle between side `k` and side `k+1`, which sits at
//! vertex `k+1`.

pub mod angle;
pub mod closure;
pub mod io;

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::hyperbolic::{
    self, distance, geodesic_through, GeometryError, HGeodesic, HIsometry, HPoint, KleinChord, Tangent,
};

pub use angle::{AngleClass, AngleSummary, RationalAngle};
pub use closure::{solve_closure, ClosureError, ClosureSolution, DeformationParams};

/// Tolerance for declared-vs-measured angle agreement.
pub const ANGLE_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolygonError {
    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertices {0} and {1} coincide")]
    CoincidentVertices(usize, usize),
    #[error("angle sum {sum} is not below (n-2)π = {bound}")]
    AngleSumViolation { sum: f64, bound: f64 },
    #[error("expected {expected} angles, got {got}")]
    AngleCountMismatch { expected: usize, got: usize },
    #[error("bad angle: {0}")]
    BadAngle(String),
    #[error("invalid polygon: {0}")]
    Invalid(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("malformed polygon file: {0}")]
    Parse(String),
}

/// One failed validation check.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum ValidationFailure {
    /// Sides with these labels cross or touch.
    NotSimple { side_a: usize, side_b: usize },
    Clockwise,
    AngleSum { sum: f64, bound: f64 },
    /// Declared angle at the vertex between sides `label` and `label+1`
    /// disagrees with the measured one.
    AngleMismatch { label: usize, declared: f64, measured: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub simple: bool,
    pub counterclockwise: bool,
    pub angle_sum_ok: bool,
    pub angles_consistent: bool,
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledPolygon {
    vertices: Vec<HPoint>,
    angles: Vec<RationalAngle>,
    sides: Vec<HGeodesic>,
    pub name: Option<String>,
}

impl LabeledPolygon {
    /// Build from counterclockwise vertices; angles are measured.
    pub fn from_vertices(vertices: Vec<HPoint>) -> Result<LabeledPolygon, PolygonError> {
        let n = vertices.len();
        if n < 3 {
            return Err(PolygonError::TooFewVertices(n));
        }
        let mut sides = Vec::with_capacity(n);
        for k in 0..n {
            let (a, b) = (&vertices[k], &vertices[(k + 1) % n]);
            if distance(a, b) <= hyperbolic::TOL_COINCIDENT {
                return Err(PolygonError::CoincidentVertices(k + 1, (k + 1) % n + 1));
            }
            sides.push(geodesic_through(a, b)?);
        }
        let mut poly = LabeledPolygon { vertices, angles: Vec::new(), sides, name: None };
        poly.angles = (0..n).map(|k| RationalAngle::numeric(poly.measured_angle(k))).collect();
        Ok(poly)
    }

    /// Replace angles by declared values (entries `None` stay measured).
    pub fn with_declared_angles(mut self, declared: &[Option<(u32, u32)>]) -> Result<LabeledPolygon, PolygonError> {
        if declared.len() != self.n() {
            return Err(PolygonError::AngleCountMismatch { expected: self.n(), got: declared.len() });
        }
        for (k, d) in declared.iter().enumerate() {
            if let Some((p, q)) = d {
                self.angles[k] = RationalAngle::pi_frac(*p, *q)?;
            }
        }
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> LabeledPolygon {
        self.name = Some(name.into());
        self
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[HPoint] {
        &self.vertices
    }

    pub fn vertex(&self, k: usize) -> HPoint {
        self.vertices[k % self.n()]
    }

    /// Side with 0-based index `k` (label `k+1`).
    pub fn side(&self, k: usize) -> &HGeodesic {
        &self.sides[k % self.n()]
    }

    pub fn sides(&self) -> &[HGeodesic] {
        &self.sides
    }

    pub fn angles(&self) -> &[RationalAngle] {
        &self.angles
    }

    /// Endpoints of side `k`.
    pub fn side_segment(&self, k: usize) -> (HPoint, HPoint) {
        (self.vertex(k), self.vertex(k + 1))
    }

    pub fn side_length(&self, k: usize) -> f64 {
        let (a, b) = self.side_segment(k);
        distance(&a, &b)
    }

    pub fn side_lengths(&self) -> Vec<f64> {
        (0..self.n()).map(|k| self.side_length(k)).collect()
    }

    /// Interior angle between side `k` and side `k+1`, measured from the
    /// vertex coordinates.
    pub fn measured_angle(&self, k: usize) -> f64 {
        let a = self.side(k);
        let b = self.side(k + 1);
        let c = hyperbolic::q(&a.normal(), &b.normal()).clamp(-1.0, 1.0);
        let turn = c.acos();
        // A left turn (next-next vertex on the inner side) is a convex corner.
        if a.side_value(&self.vertex(k + 2)) >= 0.0 {
            PI - turn
        } else {
            PI + turn
        }
    }

    /// Angle-defect area `(n-2)π - Σα`.
    pub fn area(&self) -> f64 {
        (self.n() as f64 - 2.0) * PI - self.angles.iter().map(|a| a.radians()).sum::<f64>()
    }

    pub fn classify_angles(&self) -> (Vec<AngleClass>, AngleSummary) {
        let classes: Vec<AngleClass> = self.angles.iter().map(|a| a.class()).collect();
        let summary = angle::summarize(&classes);
        (classes, summary)
    }

    /// Unit-normalized vertex sum; an interior point for convex polygons.
    pub fn centroid(&self) -> HPoint {
        let s = self.vertices.iter().fold(nalgebra::Vector3::zeros(), |acc, v| acc + v.vec());
        HPoint::from_vector(&s).expect("sum of points on the upper sheet")
    }

    /// Largest distance from the centroid to a vertex.
    pub fn circumradius(&self) -> f64 {
        let c = self.centroid();
        self.vertices.iter().map(|v| distance(&c, v)).fold(0.0, f64::max)
    }

    pub fn klein_vertices(&self) -> Vec<[f64; 2]> {
        self.vertices.iter().map(|v| v.to_klein()).collect()
    }

    /// Strict interior test (even-odd rule in the Klein disk).
    pub fn contains(&self, p: &HPoint) -> bool {
        let [x, y] = p.to_klein();
        let pts = self.klein_vertices();
        let n = pts.len();
        let mut inside = false;
        for i in 0..n {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            if (a[1] > y) != (b[1] > y) {
                let t = (y - a[1]) / (b[1] - a[1]);
                if x < a[0] + t * (b[0] - a[0]) {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Hyperbolic distance from `p` to the boundary.
    pub fn distance_to_boundary(&self, p: &HPoint) -> f64 {
        (0..self.n()).map(|k| self.distance_to_side(k, p)).fold(f64::INFINITY, f64::min)
    }

    /// Distance from `p` to the closed segment of side `k`.
    pub fn distance_to_side(&self, k: usize, p: &HPoint) -> f64 {
        let g = self.side(k);
        let (a, b) = self.side_segment(k);
        let foot = g.foot(p);
        let (ta, tb, tf) = (g.param_of(&a), g.param_of(&b), g.param_of(&foot));
        if (tf - ta) * (tf - tb) <= 0.0 {
            p.distance_to_line(g)
        } else {
            distance(p, &a).min(distance(p, &b))
        }
    }

    /// A point drawn uniformly from the Klein bounding box of the polygon,
    /// rejected until it is inside and at least `clearance` from the boundary.
    pub fn sample_interior<R: rand::Rng + ?Sized>(&self, rng: &mut R, clearance: f64) -> HPoint {
        let ks = self.klein_vertices();
        let (mut x0, mut x1, mut y0, mut y1) = (1.0f64, -1.0f64, 1.0f64, -1.0f64);
        for k in &ks {
            x0 = x0.min(k[0]);
            x1 = x1.max(k[0]);
            y0 = y0.min(k[1]);
            y1 = y1.max(k[1]);
        }
        loop {
            let Ok(p) = HPoint::from_klein(rng.random_range(x0..x1), rng.random_range(y0..y1)) else { continue };
            if self.contains(&p) && self.distance_to_boundary(&p) > clearance {
                return p;
            }
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.n();
        let mut failures = Vec::new();
        let chords: Vec<KleinChord> =
            (0..n).map(|k| KleinChord::between(&self.vertex(k), &self.vertex(k + 1))).collect();
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let bad = if adjacent {
                    // Adjacent sides only share their common vertex; a fold
                    // back shows up as a zero angle.
                    let shared = if j == i + 1 { j } else { 0 };
                    let a = self.measured_angle((shared + n - 1) % n);
                    a < 1e-12 || a > 2.0 * PI - 1e-12
                } else {
                    segments_touch(&chords[i], &chords[j])
                };
                if bad {
                    failures.push(ValidationFailure::NotSimple { side_a: i + 1, side_b: j + 1 });
                }
            }
        }
        let simple = failures.is_empty();
        let pts = self.klein_vertices();
        let signed: f64 = (0..n)
            .map(|i| {
                let (a, b) = (pts[i], pts[(i + 1) % n]);
                a[0] * b[1] - a[1] * b[0]
            })
            .sum();
        let counterclockwise = signed > 0.0;
        if !counterclockwise {
            failures.push(ValidationFailure::Clockwise);
        }
        let sum: f64 = self.angles.iter().map(|a| a.radians()).sum();
        let bound = (n as f64 - 2.0) * PI;
        let angle_sum_ok = sum < bound - 1e-12;
        if !angle_sum_ok {
            failures.push(ValidationFailure::AngleSum { sum, bound });
        }
        let mut angles_consistent = true;
        for k in 0..n {
            let measured = self.measured_angle(k);
            let declared = self.angles[k].radians();
            if (measured - declared).abs() >= ANGLE_TOL {
                angles_consistent = false;
                failures.push(ValidationFailure::AngleMismatch { label: k + 1, declared, measured });
            }
        }
        ValidationReport { simple, counterclockwise, angle_sum_ok, angles_consistent, failures }
    }

    /// Same polygon with labels shifted: new side `i` is old side `i+shift`.
    pub fn relabeled(&self, shift: usize) -> LabeledPolygon {
        let n = self.n();
        let rot = |k: usize| (k + shift) % n;
        LabeledPolygon {
            vertices: (0..n).map(|k| self.vertices[rot(k)]).collect(),
            angles: (0..n).map(|k| self.angles[rot(k)]).collect(),
            sides: (0..n).map(|k| self.sides[rot(k)]).collect(),
            name: self.name.clone(),
        }
    }

    /// Image under an orientation-preserving isometry.
    pub fn transformed(&self, g: &HIsometry) -> LabeledPolygon {
        assert_eq!(g.orientation, 1, "a reflection would reverse the label order");
        LabeledPolygon {
            vertices: self.vertices.iter().map(|v| g.apply(v)).collect(),
            angles: self.angles.clone(),
            sides: self.sides.iter().map(|s| g.apply_geodesic(s)).collect(),
            name: self.name.clone(),
        }
    }

    /// Move the centroid to the origin.
    pub fn centered(&self) -> LabeledPolygon {
        self.transformed(&HIsometry::translation_to(&self.centroid()).inverse())
    }
}

fn segments_touch(a: &KleinChord, b: &KleinChord) -> bool {
    let o = |p: &[f64; 2], q: &[f64; 2], r: &[f64; 2]| (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
    let d1 = o(&a.a, &a.b, &b.a);
    let d2 = o(&a.a, &a.b, &b.b);
    let d3 = o(&b.a, &b.b, &a.a);
    let d4 = o(&b.a, &b.b, &a.b);
    d1 * d2 <= 0.0 && d3 * d4 <= 0.0
}

/// Regular `n`-gon centered at the origin with the given interior angle.
///
/// Side 1 is horizontal below the center.
pub fn build_regular(n: usize, interior: RationalAngle) -> Result<LabeledPolygon, PolygonError> {
    if n < 3 {
        return Err(PolygonError::TooFewVertices(n));
    }
    let alpha = interior.radians();
    let sum = n as f64 * alpha;
    let bound = (n as f64 - 2.0) * PI;
    if !(sum < bound) {
        return Err(PolygonError::AngleSumViolation { sum, bound });
    }
    let half = PI / n as f64;
    let cosh_r = 1.0 / (half.tan() * (alpha / 2.0).tan());
    let r = cosh_r.acosh();
    let theta0 = -PI / 2.0 - half;
    let vertices = (0..n).map(|k| HPoint::polar(r, theta0 + 2.0 * half * k as f64)).collect();
    let mut poly = LabeledPolygon::from_vertices(vertices)?;
    poly.angles = vec![interior; n];
    Ok(poly)
}

/// Best label-preserving alignment of `a` onto `b` by an orientation
/// preserving isometry; returns the worst vertex distance.
///
/// Candidates are the isometries matching vertex `k` and the direction of
/// side `k` for every `k`.
pub fn alignment_error(a: &LabeledPolygon, b: &LabeledPolygon) -> f64 {
    if a.n() != b.n() {
        return f64::INFINITY;
    }
    let n = a.n();
    (0..n)
        .filter_map(|k| {
            let ta = Tangent::toward(a.vertex(k), &a.vertex(k + 1)).ok()?;
            let tb = Tangent::toward(b.vertex(k), &b.vertex(k + 1)).ok()?;
            let g = HIsometry::frame(&tb).compose(&HIsometry::frame(&ta).inverse());
            Some((0..n).map(|i| distance(&g.apply(&a.vertex(i)), &b.vertex(i))).fold(0.0, f64::max))
        })
        .fold(f64::INFINITY, f64::min)
}
