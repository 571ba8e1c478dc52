//! Gauss-Bonnet bookkeeping for cone surfaces, orbifolds and branched covers.
//!
//! Areas are kept as exact rational multiples of pi whenever every input
//! angle is, so table values reproduce exactly.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::polygon::LabeledPolygon;

/// Area agreement tolerance for covers.
pub const AREA_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConeError {
    #[error("area {area} is not positive")]
    InvalidData { area: f64 },
    #[error("orbifold of genus {genus} with orders {orders:?} is not hyperbolic")]
    NotHyperbolic { genus: u32, orders: Vec<u32> },
    #[error("orbifold order {0} is below 2")]
    BadOrder(u32),
    #[error("cone angle {0} is not positive")]
    BadAngle(f64),
    #[error("the surface has no cone points; the bound needs at least one")]
    NoConePoints,
    #[error("cover fails {} check(s): {:?}", .0.len(), .0)]
    InvalidCover(Vec<CoverFailure>),
}

/// An angle, exact as a rational multiple of pi when declared that way.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    PiMultiple(Rational64),
    Radians(f64),
}

impl Angle {
    pub fn pi(p: i64, q: i64) -> Angle {
        Angle::PiMultiple(Rational64::new(p, q))
    }

    pub fn radians(&self) -> f64 {
        match self {
            Angle::PiMultiple(r) => ratio_f64(r) * PI,
            Angle::Radians(x) => *x,
        }
    }

    pub fn pi_multiple(&self) -> Option<Rational64> {
        match self {
            Angle::PiMultiple(r) => Some(*r),
            Angle::Radians(_) => None,
        }
    }
}

fn ratio_f64(r: &Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// JSON form: a bare number is radians, `"2/3pi"` or `"4pi"` is exact.
impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Angle::PiMultiple(r) => s.serialize_str(&format!("{r}pi")),
            Angle::Radians(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Angle, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Angle::Radians(x)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl FromStr for Angle {
    type Err = String;

    fn from_str(s: &str) -> Result<Angle, String> {
        let t = s.trim();
        match t.strip_suffix("pi") {
            Some(coef) => {
                let coef = coef.trim();
                let r = if coef.is_empty() { Rational64::from_integer(1) } else { coef.parse().map_err(|e| format!("{s}: {e}"))? };
                Ok(Angle::PiMultiple(r))
            }
            None => t.parse::<f64>().map(Angle::Radians).map_err(|e| format!("{s}: {e}")),
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::PiMultiple(r) => write!(f, "{r}pi"),
            Angle::Radians(x) => write!(f, "{x}"),
        }
    }
}

/// An area, with its exact value in units of pi when available.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Area {
    pub pi_multiple: Option<Rational64>,
    pub value: f64,
}

impl Area {
    fn exact(r: Rational64) -> Area {
        Area { pi_multiple: Some(r), value: ratio_f64(&r) * PI }
    }
}

impl Serialize for Area {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct AreaJson {
            value: f64,
            #[serde(skip_serializing_if = "Option::is_none")]
            pi_multiple: Option<String>,
        }
        AreaJson { value: self.value, pi_multiple: self.pi_multiple.map(|r| r.to_string()) }.serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeSurfaceData {
    pub genus: u32,
    pub cone_angles: Vec<Angle>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbifoldSignature {
    pub genus: u32,
    pub orders: Vec<u32>,
}

impl OrbifoldSignature {
    pub fn new(genus: u32, orders: Vec<u32>) -> OrbifoldSignature {
        OrbifoldSignature { genus, orders }
    }

    /// Number of even-order orbifold points.
    pub fn even_points(&self) -> usize {
        self.orders.iter().filter(|b| *b % 2 == 0).count()
    }
}

/// `Area = 4 pi (g - 1) + 2 pi n - sum theta_i`.
pub fn cone_area(data: &ConeSurfaceData) -> Result<Area, ConeError> {
    if let Some(a) = data.cone_angles.iter().find(|a| !(a.radians() > 0.0)) {
        return Err(ConeError::BadAngle(a.radians()));
    }
    let n = data.cone_angles.len() as i64;
    let base = Rational64::from_integer(4 * (data.genus as i64 - 1) + 2 * n);
    let exact: Option<Rational64> =
        data.cone_angles.iter().map(|a| a.pi_multiple()).sum::<Option<Rational64>>().map(|s| base - s);
    let area = match exact {
        Some(r) => Area::exact(r),
        None => Area { pi_multiple: None, value: ratio_f64(&base) * PI - data.cone_angles.iter().map(Angle::radians).sum::<f64>() },
    };
    if area.value <= 0.0 || area.pi_multiple.is_some_and(|r| r <= Rational64::from_integer(0)) {
        return Err(ConeError::InvalidData { area: area.value });
    }
    Ok(area)
}

/// `Area = 2 pi (2g - 2 + sum (1 - 1/b_i))`, exact.
pub fn orbifold_area(sig: &OrbifoldSignature) -> Result<Area, ConeError> {
    if let Some(&b) = sig.orders.iter().find(|b| **b < 2) {
        return Err(ConeError::BadOrder(b));
    }
    let one = Rational64::from_integer(1);
    let s: Rational64 = sig.orders.iter().map(|&b| one - Rational64::new(1, b as i64)).sum();
    let r = (Rational64::from_integer(2 * sig.genus as i64 - 2) + s) * 2;
    if r <= Rational64::from_integer(0) {
        return Err(ConeError::NotHyperbolic { genus: sig.genus, orders: sig.orders.clone() });
    }
    Ok(Area::exact(r))
}

/// The double of a polygon: a sphere with cone angle `2 alpha_i` at each vertex.
pub fn double(poly: &LabeledPolygon) -> ConeSurfaceData {
    let cone_angles = poly
        .angles()
        .iter()
        .map(|a| match a.declared() {
            Some((p, q)) => Angle::pi(2 * p as i64, q as i64),
            None => Angle::Radians(2.0 * a.radians()),
        })
        .collect();
    ConeSurfaceData { genus: 0, cone_angles }
}

/// A point of the surface over an orbifold point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preimage {
    pub local_degree: u32,
    /// Index into the surface's cone angles; `None` for a regular point.
    #[serde(default)]
    pub cone_point: Option<usize>,
}

/// `fibers[i]` lists every preimage of orbifold point `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchedCoverData {
    pub surface: ConeSurfaceData,
    pub orbifold: OrbifoldSignature,
    pub degree: u32,
    pub fibers: Vec<Vec<Preimage>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum CoverFailure {
    DegreeTooSmall { degree: u32 },
    FiberCount { orbifold_points: usize, fibers: usize },
    FiberSum { point: usize, sum: u32, degree: u32 },
    /// A regular point over an order-`b` point must have local degree `b`.
    RegularMismatch { point: usize, local_degree: u32, order: u32 },
    ConeAngleMismatch { cone_point: usize, expected: f64, actual: f64 },
    LowLocalDegree { cone_point: usize, local_degree: u32 },
    OddOrderConePoint { cone_point: usize, order: u32 },
    ConePointCoverage { cone_point: usize, times: usize },
    ConeAngleNotAboveTwoPi { cone_point: usize, angle: f64 },
    AreaMismatch { surface: f64, degree_times_orbifold: f64 },
    Surface { message: String },
    Orbifold { message: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverReport {
    pub surface_area: Area,
    pub orbifold_area: Area,
    pub degree: u32,
    pub genus: u32,
    /// Cone points of the surface.
    pub k: usize,
    /// Even-order orbifold points.
    pub r: usize,
    /// Largest number of cone points over a single orbifold point.
    pub max_k_i: usize,
}

/// Check every invariant of a branched cover description.
pub fn validate_cover(data: &BranchedCoverData) -> Result<CoverReport, ConeError> {
    let mut fails = Vec::new();
    let surface_area = cone_area(&data.surface).map_err(|e| fails.push(CoverFailure::Surface { message: e.to_string() }));
    let orbifold_area =
        orbifold_area(&data.orbifold).map_err(|e| fails.push(CoverFailure::Orbifold { message: e.to_string() }));
    if data.degree < 2 {
        fails.push(CoverFailure::DegreeTooSmall { degree: data.degree });
    }
    let m = data.orbifold.orders.len();
    if data.fibers.len() != m {
        fails.push(CoverFailure::FiberCount { orbifold_points: m, fibers: data.fibers.len() });
    }
    let k = data.surface.cone_angles.len();
    let mut hits = vec![0usize; k];
    let mut max_k_i = 0;
    for (i, (fiber, &b)) in data.fibers.iter().zip(&data.orbifold.orders).enumerate() {
        let sum: u32 = fiber.iter().map(|p| p.local_degree).sum();
        if sum != data.degree {
            fails.push(CoverFailure::FiberSum { point: i, sum, degree: data.degree });
        }
        max_k_i = max_k_i.max(fiber.iter().filter(|p| p.cone_point.is_some()).count());
        for p in fiber {
            match p.cone_point {
                None if p.local_degree != b => {
                    fails.push(CoverFailure::RegularMismatch { point: i, local_degree: p.local_degree, order: b })
                }
                None => {}
                Some(c) if c >= k => fails.push(CoverFailure::ConePointCoverage { cone_point: c, times: 0 }),
                Some(c) => {
                    hits[c] += 1;
                    let expected = p.local_degree as f64 * 2.0 * PI / b as f64;
                    let actual = data.surface.cone_angles[c].radians();
                    if (expected - actual).abs() > AREA_TOL {
                        fails.push(CoverFailure::ConeAngleMismatch { cone_point: c, expected, actual });
                    }
                    if p.local_degree < 3 {
                        fails.push(CoverFailure::LowLocalDegree { cone_point: c, local_degree: p.local_degree });
                    }
                    if b % 2 != 0 {
                        fails.push(CoverFailure::OddOrderConePoint { cone_point: c, order: b });
                    }
                }
            }
        }
    }
    for (c, &times) in hits.iter().enumerate() {
        if times != 1 {
            fails.push(CoverFailure::ConePointCoverage { cone_point: c, times });
        }
        let angle = data.surface.cone_angles[c].radians();
        if angle <= 2.0 * PI {
            fails.push(CoverFailure::ConeAngleNotAboveTwoPi { cone_point: c, angle });
        }
    }
    if let (Ok(s), Ok(o)) = (&surface_area, &orbifold_area) {
        let expected = data.degree as f64 * o.value;
        if (s.value - expected).abs() > AREA_TOL {
            fails.push(CoverFailure::AreaMismatch { surface: s.value, degree_times_orbifold: expected });
        }
    }
    match (surface_area, orbifold_area) {
        (Ok(surface_area), Ok(orbifold_area)) if fails.is_empty() => Ok(CoverReport {
            surface_area,
            orbifold_area,
            degree: data.degree,
            genus: data.surface.genus,
            k,
            r: data.orbifold.even_points(),
            max_k_i,
        }),
        _ => Err(ConeError::InvalidCover(fails)),
    }
}

fn ratio_json<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Both inequalities behind the cone-point bound, recomputed from the data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub k: usize,
    pub genus: u32,
    pub r: usize,
    pub degree: u32,
    /// `32 (g - 1)`.
    pub bound: i64,
    /// `4 r pi (g - 1) / (3 Area(O))`, exact because orbifold areas are.
    #[serde(serialize_with = "ratio_json")]
    pub rhs: Rational64,
    pub rhs_value: f64,
    /// `d >= 3 max_i k_i`.
    pub degree_vs_cone_points: bool,
    /// `d < 4 pi (g - 1) / Area(O)`.
    pub degree_vs_area: bool,
    /// `k < rhs <= 32 (g - 1)` together with the two degree inequalities.
    pub holds: bool,
}

pub fn bound_check(data: &BranchedCoverData) -> Result<BoundCheck, ConeError> {
    let rep = validate_cover(data)?;
    if rep.k == 0 {
        return Err(ConeError::NoConePoints);
    }
    let g1 = rep.genus as i64 - 1;
    let area_pi = rep.orbifold_area.pi_multiple.expect("orbifold areas are exact");
    let rhs = Rational64::from_integer(4 * rep.r as i64 * g1) / (area_pi * 3);
    let bound = 32 * g1;
    let k = Rational64::from_integer(rep.k as i64);
    let degree_vs_cone_points = rep.degree as usize >= 3 * rep.max_k_i;
    let degree_vs_area = Rational64::from_integer(rep.degree as i64) < Rational64::from_integer(4 * g1) / area_pi;
    let holds = k < rhs && rhs <= Rational64::from_integer(bound) && degree_vs_cone_points && degree_vs_area;
    Ok(BoundCheck {
        k: rep.k,
        genus: rep.genus,
        r: rep.r,
        degree: rep.degree,
        bound,
        rhs,
        rhs_value: ratio_f64(&rhs),
        degree_vs_cone_points,
        degree_vs_area,
        holds,
    })
}

/// The genus-2 octagon surface folded onto the sphere with orders (2,2,2,4):
/// the octagon's centre is the single cone point (angle 4 pi) and maps
/// 4-to-1 onto the first order-2 point; every other preimage is regular.
pub fn octagon_example() -> BranchedCoverData {
    let regular = |e| Preimage { local_degree: e, cone_point: None };
    BranchedCoverData {
        surface: ConeSurfaceData { genus: 2, cone_angles: vec![Angle::pi(4, 1)] },
        orbifold: OrbifoldSignature::new(0, vec![2, 2, 2, 4]),
        degree: 4,
        fibers: vec![
            vec![Preimage { local_degree: 4, cone_point: Some(0) }],
            vec![regular(2), regular(2)],
            vec![regular(2), regular(2)],
            vec![regular(4)],
        ],
    }
}
