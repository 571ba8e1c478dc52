//! The hyperbolic plane in the hyperboloid model.
//!
//! Points live on the upper sheet `Q(p,p) = -1` of Minkowski space with
//! `Q(p,q) = p.x q.x + p.y q.y - p.z q.z`. A geodesic is stored through a
//! spacelike unit normal `n`; its positive side is `{p : Q(p,n) > 0}`, which
//! is the left-hand side when walking along the line in its orientation.
//! Isometries are 3x3 matrices preserving `Q`.
//!
//! The Klein disk `(x/z, y/z)` is used for incidence questions (geodesics
//! are straight chords there) and the Poincare disk only for I/O.

pub mod dd;

use nalgebra::{Matrix3, Vector3};
use thiserror::Error;

/// Algebraic invariants (unit vectors, matrix identities).
pub const TOL_ALGEBRAIC: f64 = 1e-9;
/// Point-on-line tests.
pub const TOL_INCIDENCE: f64 = 1e-8;
/// Two points closer than this are treated as one.
pub const TOL_COINCIDENT: f64 = 1e-12;
/// Ideal endpoints closer than this (on the unit circle) are equal.
pub const TOL_IDEAL: f64 = 1e-9;

/// Compositions between two re-orthonormalizations in [`IsometryChain`].
pub const REORTHO_CADENCE: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("points coincide (distance {0:e})")]
    CoincidentPoints(f64),
    #[error("point is not on both geodesics")]
    NotConcurrent,
    #[error("the two geodesics are the same line")]
    IdenticalLines,
    #[error("coordinates ({0}, {1}) are not inside the unit disk")]
    OutsideDisk(f64, f64),
    #[error("vector is not timelike")]
    NotTimelike,
    #[error("vector is not spacelike")]
    NotSpacelike,
}

/// Minkowski form `Q(a,b)`.
#[inline]
pub fn q(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.x * b.x + a.y * b.y - a.z * b.z
}

/// `J (a x b)`: a vector Q-orthogonal to both `a` and `b`.
#[inline]
pub fn j_cross(a: &Vector3<f64>, b: &Vector3<f64>) -> Vector3<f64> {
    let c = a.cross(b);
    Vector3::new(c.x, c.y, -c.z)
}

pub fn j_matrix() -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0))
}

/// Rescale a spacelike vector to `Q(v,v) = 1`.
pub fn normalize_spacelike(v: &Vector3<f64>) -> Result<Vector3<f64>, GeometryError> {
    let qq = q(v, v);
    if !(qq > 0.0) || !qq.is_finite() {
        return Err(GeometryError::NotSpacelike);
    }
    Ok(v / qq.sqrt())
}

/// A point of the hyperbolic plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl HPoint {
    pub fn origin() -> HPoint {
        HPoint { x: 0.0, y: 0.0, z: 1.0 }
    }

    /// Project a timelike vector onto the upper sheet.
    pub fn from_vector(v: &Vector3<f64>) -> Result<HPoint, GeometryError> {
        let qq = q(v, v);
        if !(qq < 0.0) || !qq.is_finite() {
            return Err(GeometryError::NotTimelike);
        }
        let s = v.z.signum() / (-qq).sqrt();
        Ok(HPoint { x: v.x * s, y: v.y * s, z: v.z * s })
    }

    /// The point at distance `r` from the origin in direction `theta`.
    pub fn polar(r: f64, theta: f64) -> HPoint {
        let s = r.sinh();
        HPoint { x: s * theta.cos(), y: s * theta.sin(), z: r.cosh() }
    }

    pub fn from_klein(u: f64, v: f64) -> Result<HPoint, GeometryError> {
        let r2 = u * u + v * v;
        if !(r2 < 1.0) {
            return Err(GeometryError::OutsideDisk(u, v));
        }
        let w = 1.0 / (1.0 - r2).sqrt();
        Ok(HPoint { x: u * w, y: v * w, z: w })
    }

    pub fn from_poincare(u: f64, v: f64) -> Result<HPoint, GeometryError> {
        let r2 = u * u + v * v;
        if !(r2 < 1.0) {
            return Err(GeometryError::OutsideDisk(u, v));
        }
        let d = 1.0 - r2;
        Ok(HPoint { x: 2.0 * u / d, y: 2.0 * v / d, z: (1.0 + r2) / d })
    }

    pub fn to_klein(&self) -> [f64; 2] {
        [self.x / self.z, self.y / self.z]
    }

    pub fn to_poincare(&self) -> [f64; 2] {
        [self.x / (1.0 + self.z), self.y / (1.0 + self.z)]
    }

    pub fn vec(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    /// `Q(p,p) + 1`, zero for an exact point.
    pub fn defect(&self) -> f64 {
        q(&self.vec(), &self.vec()) + 1.0
    }

    /// Hyperbolic distance to the line `g` (unsigned).
    pub fn distance_to_line(&self, g: &HGeodesic) -> f64 {
        g.signed_offset(self).abs()
    }
}

/// Hyperbolic distance.
///
/// Computed as `2 asinh(|p - q|_Q / 2)`, which equals `arccosh(-Q(p,q))` but
/// keeps full relative precision for nearby points.
pub fn distance(p: &HPoint, r: &HPoint) -> f64 {
    let d = p.vec() - r.vec();
    let dd = q(&d, &d).max(0.0);
    2.0 * (dd.sqrt() / 2.0).asinh()
}

/// Midpoint of the segment `pq`.
pub fn midpoint(p: &HPoint, r: &HPoint) -> HPoint {
    HPoint::from_vector(&(p.vec() + r.vec())).expect("sum of future timelike vectors is timelike")
}

/// An oriented geodesic line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HGeodesic {
    n: Vector3<f64>,
}

/// Result of intersecting two geodesic lines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Intersection {
    Point(HPoint),
    Disjoint,
    Asymptotic,
    Equal,
}

impl HGeodesic {
    pub fn from_normal(n: &Vector3<f64>) -> Result<HGeodesic, GeometryError> {
        Ok(HGeodesic { n: normalize_spacelike(n)? })
    }

    pub fn normal(&self) -> Vector3<f64> {
        self.n
    }

    pub fn reversed(&self) -> HGeodesic {
        HGeodesic { n: -self.n }
    }

    /// `Q(p, n)`; its sign tells the side, `asinh` of it the signed distance.
    pub fn side_value(&self, p: &HPoint) -> f64 {
        q(&p.vec(), &self.n)
    }

    /// Signed hyperbolic distance, positive on the left.
    pub fn signed_offset(&self, p: &HPoint) -> f64 {
        self.side_value(p).asinh()
    }

    pub fn contains(&self, p: &HPoint, tol: f64) -> bool {
        self.side_value(p).abs() < tol
    }

    /// Closest point of the line to `p`.
    pub fn foot(&self, p: &HPoint) -> HPoint {
        let c = self.side_value(p);
        HPoint::from_vector(&(p.vec() - c * self.n)).expect("projection stays timelike")
    }

    /// Ideal endpoints on the unit circle, `(start, end)` in the direction
    /// of travel.
    pub fn ideal_endpoints(&self) -> ([f64; 2], [f64; 2]) {
        let r = self.n.x.hypot(self.n.y);
        let psi = self.n.y.atan2(self.n.x);
        let a = (self.n.z / r).clamp(-1.0, 1.0).acos();
        let start = psi + a;
        let end = psi - a;
        ([start.cos(), start.sin()], [end.cos(), end.sin()])
    }

    /// A point on the line together with the unit tangent pointing along the
    /// orientation; the point is the foot of the origin.
    pub fn base_tangent(&self) -> (HPoint, Vector3<f64>) {
        let o = self.foot(&HPoint::origin());
        let t = j_cross(&self.n, &o.vec());
        let t = normalize_spacelike(&t).expect("tangent of a valid line");
        (o, t)
    }

    /// Point at signed arc length `s` from the foot of the origin.
    pub fn point_at(&self, s: f64) -> HPoint {
        let (o, t) = self.base_tangent();
        HPoint::from_vector(&(s.cosh() * o.vec() + s.sinh() * t)).expect("geodesic point")
    }

    /// Arc-length coordinate of a point on the line, compatible with
    /// [`HGeodesic::point_at`].
    pub fn param_of(&self, p: &HPoint) -> f64 {
        let (_, t) = self.base_tangent();
        q(&p.vec(), &t).asinh()
    }
}

/// The line through `p` and `r`, oriented from `p` to `r`.
pub fn geodesic_through(p: &HPoint, r: &HPoint) -> Result<HGeodesic, GeometryError> {
    let d = distance(p, r);
    if d <= TOL_COINCIDENT {
        return Err(GeometryError::CoincidentPoints(d));
    }
    HGeodesic::from_normal(&j_cross(&p.vec(), &r.vec()))
}

/// Perpendicular bisector of `pq`, with `r` on the positive side.
pub fn perpendicular_bisector(p: &HPoint, r: &HPoint) -> Result<HGeodesic, GeometryError> {
    let d = distance(p, r);
    if d <= TOL_COINCIDENT {
        return Err(GeometryError::CoincidentPoints(d));
    }
    HGeodesic::from_normal(&(r.vec() - p.vec()))
}

/// Unsigned angle in `(0, pi)` between two lines at a common point.
pub fn angle_at(g1: &HGeodesic, g2: &HGeodesic, at: &HPoint) -> Result<f64, GeometryError> {
    if !g1.contains(at, TOL_INCIDENCE) || !g2.contains(at, TOL_INCIDENCE) {
        return Err(GeometryError::NotConcurrent);
    }
    let c = q(&g1.n, &g2.n);
    if c.abs() >= 1.0 - 1e-15 {
        return Err(GeometryError::IdenticalLines);
    }
    Ok(c.clamp(-1.0, 1.0).acos())
}

fn circle_close(a: &[f64; 2], b: &[f64; 2]) -> bool {
    (a[0] - b[0]).hypot(a[1] - b[1]) < TOL_IDEAL
}

pub fn intersect(g1: &HGeodesic, g2: &HGeodesic) -> Intersection {
    if (g1.n - g2.n).amax() < TOL_IDEAL || (g1.n + g2.n).amax() < TOL_IDEAL {
        return Intersection::Equal;
    }
    let (a1, b1) = g1.ideal_endpoints();
    let (a2, b2) = g2.ideal_endpoints();
    if circle_close(&a1, &a2) || circle_close(&a1, &b2) || circle_close(&b1, &a2) || circle_close(&b1, &b2) {
        return Intersection::Asymptotic;
    }
    let c = q(&g1.n, &g2.n);
    if c.abs() < 1.0 {
        let p = j_cross(&g1.n, &g2.n);
        match HPoint::from_vector(&p) {
            Ok(pt) => Intersection::Point(pt),
            Err(_) => Intersection::Disjoint,
        }
    } else {
        Intersection::Disjoint
    }
}

/// The common perpendicular of two ultraparallel lines as `(line, foot on g1,
/// foot on g2)`. `None` when the lines meet or are asymptotic.
pub fn common_perpendicular(g1: &HGeodesic, g2: &HGeodesic) -> Option<(HGeodesic, HPoint, HPoint)> {
    if intersect(g1, g2) != Intersection::Disjoint {
        return None;
    }
    let m = HGeodesic::from_normal(&j_cross(&g1.n, &g2.n)).ok()?;
    let f1 = HPoint::from_vector(&j_cross(&g1.n, &m.n)).ok()?;
    let f2 = HPoint::from_vector(&j_cross(&g2.n, &m.n)).ok()?;
    Some((m, f1, f2))
}

/// A Euclidean segment in the Klein disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KleinChord {
    pub a: [f64; 2],
    pub b: [f64; 2],
}

fn orient2d(a: &[f64; 2], b: &[f64; 2], c: &[f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

impl KleinChord {
    pub fn between(p: &HPoint, r: &HPoint) -> KleinChord {
        KleinChord { a: p.to_klein(), b: r.to_klein() }
    }

    /// Whether the two segments cross at a single interior point.
    pub fn crosses(&self, o: &KleinChord) -> bool {
        let d1 = orient2d(&self.a, &self.b, &o.a);
        let d2 = orient2d(&self.a, &self.b, &o.b);
        let d3 = orient2d(&o.a, &o.b, &self.a);
        let d4 = orient2d(&o.a, &o.b, &self.b);
        d1 * d2 < 0.0 && d3 * d4 < 0.0
    }

    pub fn length(&self) -> f64 {
        (self.b[0] - self.a[0]).hypot(self.b[1] - self.a[1])
    }
}

/// The full line as a chord between its ideal endpoints.
pub fn to_klein_line(g: &HGeodesic) -> KleinChord {
    let (a, b) = g.ideal_endpoints();
    KleinChord { a, b }
}

/// A unit tangent vector at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tangent {
    pub base: HPoint,
    pub dir: Vector3<f64>,
}

impl Tangent {
    /// Direction `theta` measured in the frame obtained by translating the
    /// origin to `base` along the connecting geodesic.
    pub fn from_angle(base: HPoint, theta: f64) -> Tangent {
        let m = HIsometry::translation_to(&base);
        let dir = m.m * Vector3::new(theta.cos(), theta.sin(), 0.0);
        Tangent { base, dir }.renormalized()
    }

    pub fn toward(base: HPoint, target: &HPoint) -> Result<Tangent, GeometryError> {
        let d = distance(&base, target);
        if d <= TOL_COINCIDENT {
            return Err(GeometryError::CoincidentPoints(d));
        }
        let t = target.vec() + q(&target.vec(), &base.vec()) * base.vec();
        Ok(Tangent { base, dir: normalize_spacelike(&t)? })
    }

    /// Inverse of [`Tangent::from_angle`].
    pub fn angle(&self) -> f64 {
        let back = HIsometry::translation_to(&self.base).inverse();
        let v = back.m * self.dir;
        v.y.atan2(v.x)
    }

    pub fn point_at(&self, s: f64) -> HPoint {
        HPoint::from_vector(&(s.cosh() * self.base.vec() + s.sinh() * self.dir)).expect("geodesic point")
    }

    /// Unit tangent at the point reached after arc length `s`.
    pub fn advanced(&self, s: f64) -> Tangent {
        let base = self.point_at(s);
        let dir = s.sinh() * self.base.vec() + s.cosh() * self.dir;
        Tangent { base, dir }.renormalized()
    }

    /// The oriented geodesic carrying this tangent (travel direction forward).
    pub fn geodesic(&self) -> HGeodesic {
        HGeodesic::from_normal(&j_cross(&self.base.vec(), &self.dir)).expect("tangent spans a line")
    }

    pub fn reversed(&self) -> Tangent {
        Tangent { base: self.base, dir: -self.dir }
    }

    /// Restore `Q(t,t) = 1`, `Q(t,p) = 0` after roundoff.
    pub fn renormalized(&self) -> Tangent {
        let p = self.base.vec();
        let t = self.dir + q(&self.dir, &p) * p;
        Tangent { base: self.base, dir: normalize_spacelike(&t).unwrap_or(self.dir) }
    }
}

/// An isometry of the hyperbolic plane as a `Q`-preserving matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HIsometry {
    pub m: Matrix3<f64>,
    pub orientation: i8,
}

impl HIsometry {
    pub fn identity() -> HIsometry {
        HIsometry { m: Matrix3::identity(), orientation: 1 }
    }

    /// Wrap a matrix; orientation is read off the determinant.
    pub fn from_matrix(m: Matrix3<f64>) -> HIsometry {
        let orientation = if m.determinant() >= 0.0 { 1 } else { -1 };
        HIsometry { m, orientation }
    }

    pub fn reflection(g: &HGeodesic) -> HIsometry {
        let n = g.n;
        let jn = Vector3::new(n.x, n.y, -n.z);
        HIsometry { m: Matrix3::identity() - 2.0 * n * jn.transpose(), orientation: -1 }
    }

    pub fn rotation_about_origin(theta: f64) -> HIsometry {
        let (s, c) = theta.sin_cos();
        HIsometry { m: Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0), orientation: 1 }
    }

    /// Translation by `t` along the x-axis.
    pub fn boost_x(t: f64) -> HIsometry {
        let (s, c) = (t.sinh(), t.cosh());
        HIsometry { m: Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, s, 0.0, c), orientation: 1 }
    }

    /// The transvection along the geodesic from the origin to `c`.
    pub fn translation_to(c: &HPoint) -> HIsometry {
        // Boost in direction u = (x,y)/|(x,y)| by r = d(o,c):
        // M = I + sinh r (e3 u^T + u e3^T) + (cosh r - 1)(u u^T + e3 e3^T).
        let rho = c.x.hypot(c.y);
        if rho == 0.0 {
            return HIsometry::identity();
        }
        let (ux, uy) = (c.x / rho, c.y / rho);
        let sh = rho; // sinh r
        let chm1 = c.z - 1.0; // cosh r - 1
        let m = Matrix3::new(
            1.0 + chm1 * ux * ux,
            chm1 * ux * uy,
            sh * ux,
            chm1 * ux * uy,
            1.0 + chm1 * uy * uy,
            sh * uy,
            sh * ux,
            sh * uy,
            c.z,
        );
        HIsometry { m, orientation: 1 }
    }

    /// Rotation by `angle` (counterclockwise) about `center`.
    pub fn rotation(center: &HPoint, angle: f64) -> HIsometry {
        let t = HIsometry::translation_to(center);
        t.compose(&HIsometry::rotation_about_origin(angle)).compose(&t.inverse())
    }

    /// Orientation-preserving isometry sending the origin to `tan.base` and
    /// the x-direction to `tan.dir`.
    pub fn frame(tan: &Tangent) -> HIsometry {
        let p = tan.base.vec();
        let t = tan.dir;
        let n = normalize_spacelike(&j_cross(&p, &t)).expect("frame of a unit tangent");
        HIsometry { m: Matrix3::from_columns(&[t, n, p]), orientation: 1 }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &HIsometry) -> HIsometry {
        HIsometry { m: self.m * other.m, orientation: self.orientation * other.orientation }
    }

    pub fn inverse(&self) -> HIsometry {
        let j = j_matrix();
        HIsometry { m: j * self.m.transpose() * j, orientation: self.orientation }
    }

    pub fn apply(&self, p: &HPoint) -> HPoint {
        HPoint::from_vector(&(self.m * p.vec())).expect("isometries preserve the hyperboloid")
    }

    pub fn apply_geodesic(&self, g: &HGeodesic) -> HGeodesic {
        HGeodesic::from_normal(&(self.m * g.n)).expect("isometries preserve spacelike vectors")
    }

    pub fn apply_tangent(&self, t: &Tangent) -> Tangent {
        Tangent { base: self.apply(&t.base), dir: self.m * t.dir }.renormalized()
    }

    /// `max |m^T J m - J|`.
    pub fn drift(&self) -> f64 {
        let j = j_matrix();
        (self.m.transpose() * j * self.m - j).amax()
    }

    pub fn distance_from_identity(&self) -> f64 {
        (self.m - Matrix3::identity()).amax()
    }

    /// Minkowski Gram-Schmidt on the columns: the third column is made a unit
    /// timelike vector and the first two unit spacelike and Q-orthogonal.
    pub fn reorthonormalize(&self) -> HIsometry {
        let c2 = self.m.column(2).into_owned();
        let p = c2 / (-q(&c2, &c2)).sqrt();
        let mut c0 = self.m.column(0).into_owned();
        c0 += q(&c0, &p) * p;
        c0 /= q(&c0, &c0).sqrt();
        let mut c1 = self.m.column(1).into_owned();
        c1 += q(&c1, &p) * p;
        c1 -= q(&c1, &c0) * c0;
        c1 /= q(&c1, &c1).sqrt();
        HIsometry { m: Matrix3::from_columns(&[c0, c1, p]), orientation: self.orientation }
    }

    /// Trace; for orientation-preserving elements `2 cosh(l) + 1` (hyperbolic)
    /// or `1 + 2 cos(theta)` (elliptic).
    pub fn trace(&self) -> f64 {
        self.m.trace()
    }
}

/// A running product of isometries that re-orthonormalizes on a fixed
/// cadence to keep drift bounded over long products.
#[derive(Clone, Debug)]
pub struct IsometryChain {
    current: HIsometry,
    since: usize,
}

impl Default for IsometryChain {
    fn default() -> Self {
        IsometryChain { current: HIsometry::identity(), since: 0 }
    }
}

impl IsometryChain {
    pub fn new() -> Self {
        Self::default()
    }

    /// Right-multiply: `current = current ∘ g`.
    pub fn push(&mut self, g: &HIsometry) {
        self.current = self.current.compose(g);
        self.since += 1;
        if self.since >= REORTHO_CADENCE {
            self.current = self.current.reorthonormalize();
            self.since = 0;
        }
    }

    pub fn get(&self) -> HIsometry {
        self.current
    }
}
