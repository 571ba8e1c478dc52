//! Reflection-group closure for `R_P^0`: side reflections plus the
//! order-2 rotations at the vertices.
//!
//! Group elements are enumerated breadth-first by word length in
//! double-double arithmetic, dropping those that move the polygon's centroid
//! far. Orientation-reversing elements with trace 1 are reflections; their
//! lines that meet the polygon are then carried around by the nearby
//! elements to fill the working region.

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::hyperbolic::dd::{Dd, DdMat3, DdVec3};
use crate::hyperbolic::{self, distance, HGeodesic, HIsometry, HPoint, Intersection};
use crate::polygon::{AngleClass, LabeledPolygon};

/// Two lines are the same when their ideal endpoints agree to this.
pub const LINE_DEDUP: f64 = 1e-6;
/// Angle, distance or rotation below which the group is declared indiscrete.
pub const INDISCRETE_EPS: f64 = 1e-4;
/// Tile angles must match `pi/k` to this.
pub const TILE_ANGLE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TilingBudget {
    pub max_word_len: usize,
    /// Lines are kept when they pass within this hyperbolic distance of the polygon.
    pub region_margin: f64,
    /// Cap on distinct group elements before giving up.
    pub max_elements: usize,
}

impl Default for TilingBudget {
    fn default() -> Self {
        TilingBudget { max_word_len: 12, region_margin: 2.0, max_elements: 150_000 }
    }
}

/// A reflection line, oriented so that its ideal endpoints run counterclockwise
/// from `endpoints[0]` to `endpoints[1]` with the smaller polar angle first.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LineRecord {
    pub normal: [f64; 3],
    pub endpoints: [[f64; 2]; 2],
    #[serde(skip)]
    angles: [f64; 2],
}

impl LineRecord {
    pub fn from_geodesic(g: &HGeodesic) -> LineRecord {
        let polar = |p: [f64; 2]| p[1].atan2(p[0]).rem_euclid(TAU);
        let (a, b) = g.ideal_endpoints();
        let (g, a, b) = if polar(a) <= polar(b) { (*g, a, b) } else { (g.reversed(), b, a) };
        let n = g.normal();
        LineRecord { normal: [n.x, n.y, n.z], endpoints: [a, b], angles: [polar(a), polar(b)] }
    }

    pub fn geodesic(&self) -> HGeodesic {
        HGeodesic::from_normal(&Vector3::from(self.normal)).expect("stored normals are spacelike")
    }

    /// Same line up to [`LINE_DEDUP`] on the ideal endpoints, in either order.
    pub fn same_as(&self, o: &LineRecord) -> bool {
        let d = |p: [f64; 2], q: [f64; 2]| (p[0] - q[0]).hypot(p[1] - q[1]);
        let [a, b] = self.endpoints;
        let [c, e] = o.endpoints;
        // Endpoints near polar angle 0 may come in either order.
        d(a, c).max(d(b, e)).min(d(a, e).max(d(b, c))) < LINE_DEDUP
    }
}

/// Why a group was judged indiscrete. Each variant carries enough data to be
/// re-checked by [`IndiscreteWitness::recheck`] without rerunning the search.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndiscreteWitness {
    /// An angle that is not a rational multiple of pi: the rotation
    /// `r_i r_{i+1}` has infinite order.
    IrrationalAngle { label: usize, radians: f64 },
    /// Two distinct reflection lines meeting at a tiny angle.
    NearlyConcurrent { a: LineRecord, b: LineRecord, angle: f64 },
    /// Two distinct reflection lines at a tiny distance, or asymptotic.
    NearlyParallel { a: LineRecord, b: LineRecord, distance: f64 },
    /// A group element that is not the identity yet barely moves anything.
    SmallRotation { matrix: [[f64; 3]; 3], angle: f64 },
    SmallTranslation { matrix: [[f64; 3]; 3], length: f64 },
}

impl IndiscreteWitness {
    /// Recompute the witness measure from its stored data.
    pub fn recheck(&self) -> bool {
        match self {
            IndiscreteWitness::IrrationalAngle { radians, .. } => {
                crate::polygon::angle::reconstruct_rational(*radians).is_none()
            }
            IndiscreteWitness::NearlyConcurrent { a, b, .. } | IndiscreteWitness::NearlyParallel { a, b, .. } => {
                if a.same_as(b) {
                    return false;
                }
                match intersect_measure(a, b) {
                    Some(m) => m < INDISCRETE_EPS,
                    None => false,
                }
            }
            IndiscreteWitness::SmallRotation { matrix, .. } | IndiscreteWitness::SmallTranslation { matrix, .. } => {
                let g = HIsometry::from_matrix(Matrix3::from_fn(|i, j| matrix[i][j]));
                g.orientation == 1 && g.distance_from_identity() > 1e-7 && motion_size(&g) < INDISCRETE_EPS
            }
        }
    }
}

/// Angle for crossing lines, distance for ultraparallel ones, zero when asymptotic.
fn intersect_measure(a: &LineRecord, b: &LineRecord) -> Option<f64> {
    let (ga, gb) = (a.geodesic(), b.geodesic());
    match hyperbolic::intersect(&ga, &gb) {
        Intersection::Point(_) => {
            let c = hyperbolic::q(&ga.normal(), &gb.normal()).abs().min(1.0);
            Some(c.acos().min(PI - c.acos()))
        }
        Intersection::Disjoint => Some(hyperbolic::q(&ga.normal(), &gb.normal()).abs().max(1.0).acosh()),
        Intersection::Asymptotic => Some(0.0),
        Intersection::Equal => None,
    }
}

/// Rotation angle or translation length of an orientation-preserving element.
fn motion_size(g: &HIsometry) -> f64 {
    let t = g.trace();
    if t <= 3.0 {
        ((t - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
    } else {
        ((t - 1.0) / 2.0).acosh()
    }
}

/// A tile of a reflective tiling, with interior angles `pi/k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tile {
    pub polygon: LabeledPolygon,
    pub submultiples: Vec<u32>,
}

impl Tile {
    pub fn n(&self) -> usize {
        self.polygon.n()
    }

    pub fn is_triangle(&self) -> bool {
        self.n() == 3
    }
}

impl Serialize for Tile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct TileJson {
            sides: usize,
            vertices: Vec<[f64; 2]>,
            angle_denominators: Vec<u32>,
            area: f64,
        }
        TileJson {
            sides: self.n(),
            vertices: self.polygon.klein_vertices(),
            angle_denominators: self.submultiples.clone(),
            area: self.polygon.area(),
        }
        .serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TilingStatus {
    Discrete {
        tile: Tile,
        triangle: bool,
        tiles_in_p: usize,
    },
    Indiscrete {
        witness: IndiscreteWitness,
    },
    /// Reflections in the three sides of a triangle were found before the
    /// line set stabilized.
    TriangleWitness {
        lines: [LineRecord; 3],
    },
    BudgetExhausted {
        depth: usize,
        lines_found: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TilingResult {
    #[serde(flatten)]
    pub status: TilingStatus,
    pub depth_reached: usize,
    pub elements: usize,
    /// In-region reflection lines, sorted by ideal endpoints.
    #[serde(skip)]
    pub lines: Vec<LineRecord>,
}

/// Lines meeting the working region, deduplicated, with incremental
/// indiscreteness checks against every stored line.
struct LineSet {
    by_bucket: BTreeMap<i64, Vec<usize>>,
    lines: Vec<LineRecord>,
}

const BUCKET: f64 = 1e-4;

impl LineSet {
    fn new() -> Self {
        LineSet { by_bucket: BTreeMap::new(), lines: Vec::new() }
    }

    fn bucket(a: f64) -> i64 {
        (a / BUCKET).floor() as i64
    }

    fn contains(&self, l: &LineRecord) -> bool {
        let b = Self::bucket(l.angles[0]);
        let last = Self::bucket(TAU);
        // Polar angle wraps at 0 and 2pi.
        let mut keys = vec![b - 1, b, b + 1];
        if b <= 1 {
            keys.extend([last - 1, last]);
        }
        if b >= last - 1 {
            keys.extend([0, 1]);
        }
        keys.iter().filter_map(|k| self.by_bucket.get(k)).flatten().any(|&i| self.lines[i].same_as(l))
    }

    /// Insert a new line; an indiscreteness witness is returned if it sits
    /// too close to a stored line.
    fn insert(&mut self, l: LineRecord) -> Option<IndiscreteWitness> {
        if self.contains(&l) {
            return None;
        }
        for o in &self.lines {
            let c = hyperbolic::q(&Vector3::from(l.normal), &Vector3::from(o.normal)).abs();
            if (c - 1.0).abs() > 1e-6 {
                continue;
            }
            if let Some(m) = intersect_measure(&l, o) {
                if m < INDISCRETE_EPS {
                    let crossing = matches!(hyperbolic::intersect(&l.geodesic(), &o.geodesic()), Intersection::Point(_));
                    return Some(if crossing {
                        IndiscreteWitness::NearlyConcurrent { a: *o, b: l, angle: m }
                    } else {
                        IndiscreteWitness::NearlyParallel { a: *o, b: l, distance: m }
                    });
                }
            }
        }
        // Filed under both endpoints, so a lookup by either one finds it.
        let (b0, b1) = (Self::bucket(l.angles[0]), Self::bucket(l.angles[1]));
        self.by_bucket.entry(b0).or_default().push(self.lines.len());
        if b1 != b0 {
            self.by_bucket.entry(b1).or_default().push(self.lines.len());
        }
        self.lines.push(l);
        None
    }

    fn sorted(&self) -> Vec<LineRecord> {
        let mut v = self.lines.clone();
        v.sort_by(|a, b| a.angles.partial_cmp(&b.angles).expect("finite polar angles"));
        v
    }
}

/// Hyperbolic distance from a line to a polygon (zero when they meet).
pub fn line_polygon_distance(poly: &LabeledPolygon, g: &HGeodesic) -> f64 {
    let n = g.normal();
    let vals: Vec<f64> = poly.vertices().iter().map(|v| g.side_value(v)).collect();
    if vals.iter().any(|v| *v <= 0.0) && vals.iter().any(|v| *v >= 0.0) {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for k in 0..poly.n() {
        let (a, b) = poly.side_segment(k);
        let len = distance(&a, &b);
        // Along the side, Q(p(t), n) = A cosh t + B sinh t keeps one sign.
        let u = (b.vec() - a.vec() * len.cosh()) / len.sinh();
        let (qa, qb) = (hyperbolic::q(&a.vec(), &n), hyperbolic::q(&u, &n));
        let mut m = qa.abs().min(hyperbolic::q(&b.vec(), &n).abs());
        if qb.abs() < qa.abs() {
            let t = (-qb / qa).atanh();
            if t > 0.0 && t < len {
                m = m.min((qa * qa - qb * qb).sqrt());
            }
        }
        best = best.min(m.asinh());
    }
    best
}

fn matrix_key(m: &Matrix3<f64>, orientation: i8) -> [i64; 10] {
    let mut k = [0i64; 10];
    for (i, x) in m.iter().enumerate() {
        k[i] = (x * 1e6).round() as i64;
    }
    k[9] = orientation as i64;
    k
}

fn matrix_rows(m: &Matrix3<f64>) -> [[f64; 3]; 3] {
    [[m[(0, 0)], m[(0, 1)], m[(0, 2)]], [m[(1, 0)], m[(1, 1)], m[(1, 2)]], [m[(2, 0)], m[(2, 1)], m[(2, 2)]]]
}

/// Unit normal of an orientation-reversing element, if it is a reflection.
fn reflection_normal(m: &DdMat3, orientation: i8) -> Option<DdVec3> {
    let trace = (m.0[0][0] + m.0[1][1] + m.0[2][2]).to_f64();
    if orientation != -1 || (trace - 1.0).abs() > 1e-7 {
        return None;
    }
    // I - M = 2 n (Jn)^T, so every column is a multiple of n.
    let col = |j: usize| {
        let e = |i: usize| if i == j { Dd::ONE } else { Dd::ZERO };
        DdVec3([e(0) - m.0[0][j], e(1) - m.0[1][j], e(2) - m.0[2][j]])
    };
    let best = (0..3).max_by(|&a, &b| {
        let na: f64 = col(a).to_f64().iter().map(|x| x * x).sum();
        let nb: f64 = col(b).to_f64().iter().map(|x| x * x).sum();
        na.total_cmp(&nb)
    })?;
    col(best).normalized_spacelike()
}

/// Three pairwise-crossing lines with distinct crossing points, searched among
/// the lines closest to `center`.
fn find_triangle(lines: &[LineRecord], center: &HPoint) -> Option<[LineRecord; 3]> {
    let mut near: Vec<(f64, LineRecord)> = lines.iter().map(|l| (center.distance_to_line(&l.geodesic()), *l)).collect();
    near.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.angles.partial_cmp(&b.1.angles).expect("finite")));
    near.truncate(160);
    let ls: Vec<LineRecord> = near.into_iter().map(|(_, l)| l).collect();
    let m = ls.len();
    let mut meet: Vec<Vec<Option<HPoint>>> = vec![vec![None; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            if let Intersection::Point(p) = hyperbolic::intersect(&ls[i].geodesic(), &ls[j].geodesic()) {
                meet[i][j] = Some(p);
                meet[j][i] = Some(p);
            }
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            let Some(pij) = meet[i][j] else { continue };
            for k in j + 1..m {
                let (Some(pik), Some(pjk)) = (meet[i][k], meet[j][k]) else { continue };
                if distance(&pij, &pik) > 1e-6 && distance(&pij, &pjk) > 1e-6 && distance(&pik, &pjk) > 1e-6 {
                    return Some([ls[i], ls[j], ls[k]]);
                }
            }
        }
    }
    None
}

/// Enumerate `R_P^0` and decide discreteness within the budget.
pub fn tiling_closure(poly: &LabeledPolygon, budget: &TilingBudget) -> TilingResult {
    let (classes, _) = poly.classify_angles();
    if let Some(k) = classes.iter().position(|c| *c == AngleClass::Irrational) {
        return TilingResult {
            status: TilingStatus::Indiscrete {
                witness: IndiscreteWitness::IrrationalAngle { label: k + 1, radians: poly.angles()[k].radians() },
            },
            depth_reached: 0,
            elements: 0,
            lines: Vec::new(),
        };
    }

    let n = poly.n();
    let center = poly.centroid();
    let rc = poly.circumradius();
    // Every region line is g(L) for a line L meeting P and an element g that
    // moves the centroid by at most `transport`; the extra `rc` in `prune`
    // leaves room for the words that reach those elements.
    let transport = rc + budget.region_margin + rc;
    let prune = transport + rc;
    let dd_verts: Vec<DdVec3> = poly
        .vertices()
        .iter()
        .map(|v| DdVec3::from_f64([v.x, v.y, v.z]).normalized_timelike().expect("vertices are timelike"))
        .collect();
    let mut gens: Vec<(DdMat3, i8)> = (0..n)
        .map(|k| {
            let nk = dd_verts[k].j_cross(&dd_verts[(k + 1) % n]).normalized_spacelike().expect("distinct vertices");
            (DdMat3::reflection(&nk), -1)
        })
        .collect();
    gens.extend(dd_verts.iter().map(|v| (DdMat3::half_turn(v), 1)));

    let as_f64 = |m: &DdMat3, o: i8| HIsometry { m: Matrix3::from_fn(|i, j| m.0[i][j].to_f64()), orientation: o };
    let mut seen: HashSet<[i64; 10]> = HashSet::new();
    seen.insert(matrix_key(&Matrix3::identity(), 1));
    let mut frontier = vec![(DdMat3::identity(), 1i8)];
    let mut near: Vec<DdMat3> = vec![DdMat3::identity()];
    let mut base: Vec<DdVec3> = Vec::new();
    let mut base_set = LineSet::new();
    let mut lines = LineSet::new();
    let mut counts: Vec<usize> = vec![0];
    let indiscrete = |witness, depth, elements, lines: &LineSet| TilingResult {
        status: TilingStatus::Indiscrete { witness },
        depth_reached: depth,
        elements,
        lines: lines.sorted(),
    };

    for depth in 1..=budget.max_word_len {
        let mut next = Vec::new();
        let mut new_near = Vec::new();
        let mut new_base = Vec::new();
        for (g, go) in &frontier {
            for (s, so) in &gens {
                let h = g.mul(s);
                let ho = go * so;
                let hf = as_f64(&h, ho);
                let disp = distance(&hf.apply(&center), &center);
                if disp > prune {
                    continue;
                }
                if !seen.insert(matrix_key(&hf.m, ho)) {
                    continue;
                }
                if ho == 1 && hf.distance_from_identity() > 1e-7 && motion_size(&hf) < INDISCRETE_EPS {
                    let witness = if hf.trace() <= 3.0 {
                        IndiscreteWitness::SmallRotation { matrix: matrix_rows(&hf.m), angle: motion_size(&hf) }
                    } else {
                        IndiscreteWitness::SmallTranslation { matrix: matrix_rows(&hf.m), length: motion_size(&hf) }
                    };
                    return indiscrete(witness, depth, seen.len(), &lines);
                }
                if let Some(nrm) = reflection_normal(&h, ho) {
                    let line = HGeodesic::from_normal(&Vector3::from(nrm.to_f64())).expect("unit normal");
                    let rec = LineRecord::from_geodesic(&line);
                    if line_polygon_distance(poly, &line) < 1e-9 && !base_set.contains(&rec) {
                        base_set.insert(rec);
                        new_base.push(nrm);
                    }
                }
                if disp <= transport {
                    new_near.push(h);
                }
                next.push((h, ho));
            }
        }
        // Transport: new elements carry every base line, old elements carry the new base lines.
        let pairs = new_near
            .iter()
            .flat_map(|g| base.iter().chain(new_base.iter()).map(move |l| (g, l)))
            .chain(near.iter().flat_map(|g| new_base.iter().map(move |l| (g, l))));
        for (g, l) in pairs {
            let Ok(line) = HGeodesic::from_normal(&Vector3::from(g.apply(l).to_f64())) else { continue };
            if line_polygon_distance(poly, &line) <= budget.region_margin {
                if let Some(w) = lines.insert(LineRecord::from_geodesic(&line)) {
                    return indiscrete(w, depth, seen.len(), &lines);
                }
            }
        }
        near.extend(new_near);
        base.extend(new_base);
        counts.push(lines.lines.len());
        if seen.len() > budget.max_elements {
            return TilingResult {
                status: TilingStatus::BudgetExhausted { depth, lines_found: lines.lines.len() },
                depth_reached: depth,
                elements: seen.len(),
                lines: lines.sorted(),
            };
        }
        if depth >= 3 && counts[depth] == counts[depth - 2] {
            let sorted = lines.sorted();
            if let Some((tile, tiles_in_p)) = extract_tile(poly, &sorted) {
                let triangle = tile.is_triangle();
                return TilingResult {
                    status: TilingStatus::Discrete { tile, triangle, tiles_in_p },
                    depth_reached: depth,
                    elements: seen.len(),
                    lines: sorted,
                };
            }
        }
        if let Some(tri) = find_triangle(&lines.lines, &center) {
            return TilingResult {
                status: TilingStatus::TriangleWitness { lines: tri },
                depth_reached: depth,
                elements: seen.len(),
                lines: lines.sorted(),
            };
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    TilingResult {
        status: TilingStatus::BudgetExhausted { depth: budget.max_word_len, lines_found: lines.lines.len() },
        depth_reached: budget.max_word_len,
        elements: seen.len(),
        lines: lines.sorted(),
    }
}

/// Number of the given lines passing through `p`.
fn lines_through(lines: &[LineRecord], p: &HPoint) -> usize {
    lines.iter().filter(|l| p.distance_to_line(&l.geodesic()) < 1e-7).count()
}

/// An interior point of `poly` off every line, tried in a fixed order.
fn base_point(poly: &LabeledPolygon, lines: &[LineRecord]) -> Option<HPoint> {
    let c = poly.centroid();
    let mut candidates = vec![c];
    for k in 0..poly.n() {
        let v = poly.vertex(k);
        for f in [0.37, 0.61, 0.83] {
            let w = hyperbolic::HPoint::from_vector(&(c.vec() * (1.0 - f) + v.vec() * f)).ok()?;
            candidates.push(hyperbolic::midpoint(&w, &poly.vertex((k + 1) % poly.n())));
            candidates.push(w);
        }
    }
    candidates.into_iter().find(|p| {
        poly.contains(p) && lines.iter().all(|l| p.distance_to_line(&l.geodesic()) > 1e-5)
    })
}

/// The face of the line arrangement containing a base point of `poly`,
/// checked against the reflective-tiling invariants.
fn extract_tile(poly: &LabeledPolygon, lines: &[LineRecord]) -> Option<(Tile, usize)> {
    let base = base_point(poly, lines)?;
    let [bx, by] = base.to_klein();
    // Sutherland-Hodgman in Klein coordinates, where the lines are straight.
    let mut face: Vec<[f64; 2]> = vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
    for l in lines {
        let [nx, ny, nz] = l.normal;
        let f = |p: &[f64; 2]| nx * p[0] + ny * p[1] - nz;
        let sign = f(&[bx, by]).signum();
        let mut out = Vec::with_capacity(face.len() + 1);
        for i in 0..face.len() {
            let (a, b) = (face[i], face[(i + 1) % face.len()]);
            let (fa, fb) = (sign * f(&a), sign * f(&b));
            if fa >= 0.0 {
                out.push(a);
            }
            if (fa >= 0.0) != (fb >= 0.0) {
                let t = fa / (fa - fb);
                out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            }
        }
        face = out;
        if face.len() < 3 {
            return None;
        }
    }
    let mut pts: Vec<[f64; 2]> = Vec::new();
    for p in face {
        if pts.last().is_none_or(|q: &[f64; 2]| (p[0] - q[0]).hypot(p[1] - q[1]) > 1e-10) {
            pts.push(p);
        }
    }
    while pts.len() > 1 {
        let (a, b) = (pts[0], pts[pts.len() - 1]);
        if (a[0] - b[0]).hypot(a[1] - b[1]) > 1e-10 {
            break;
        }
        pts.pop();
    }
    if pts.len() < 3 || pts.iter().any(|p| p[0].hypot(p[1]) >= 1.0 - 1e-12) {
        return None;
    }
    let verts = pts.iter().map(|p| HPoint::from_klein(p[0], p[1])).collect::<Result<Vec<_>, _>>().ok()?;
    let tile = LabeledPolygon::from_vertices(verts).ok()?;
    let mut ks = Vec::with_capacity(tile.n());
    for k in 0..tile.n() {
        let a = tile.measured_angle(k);
        let m = (PI / a).round();
        if m < 2.0 || (a - PI / m).abs() > TILE_ANGLE_TOL {
            return None;
        }
        ks.push(m as u32);
    }
    // At each vertex of P the lines through it cut the angle into equal
    // wedges of the tile angle, and that angle must be pi/(2k).
    for (k, v) in poly.vertices().iter().enumerate() {
        let m = lines_through(lines, v);
        let alpha = poly.angles()[(k + poly.n() - 1) % poly.n()].radians();
        let wedges = alpha / (PI / m as f64);
        if !m.is_multiple_of(2) || (wedges - wedges.round()).abs() > 1e-6 {
            return None;
        }
    }
    let ratio = poly.area() / tile.area();
    if (ratio - ratio.round()).abs() > 1e-6 || ratio.round() < 1.0 {
        return None;
    }
    Some((Tile { polygon: tile, submultiples: ks }, ratio.round() as usize))
}
