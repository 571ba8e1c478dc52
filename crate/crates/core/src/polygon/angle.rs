//! Interior angles as rational multiples of pi, and their classification.

use std::f64::consts::PI;

use serde::Serialize;

use super::PolygonError;

/// Largest denominator tried when reconstructing `p/q` from a measured angle.
pub const Q_MAX: u64 = 1000;
/// Radian tolerance for accepting a reconstruction.
pub const RATIONAL_TOL: f64 = 1e-9;

/// An interior angle, optionally declared exactly as `p*pi/q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RationalAngle {
    declared: Option<(u32, u32)>,
    radians: f64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl RationalAngle {
    /// The angle `p*pi/q`, reduced to lowest terms.
    pub fn pi_frac(p: u32, q: u32) -> Result<RationalAngle, PolygonError> {
        if p == 0 || q == 0 || p >= 2 * q {
            return Err(PolygonError::BadAngle(format!("{p}π/{q} is not in (0, 2π)")));
        }
        let g = gcd(p as u64, q as u64) as u32;
        let (p, q) = (p / g, q / g);
        Ok(RationalAngle { declared: Some((p, q)), radians: p as f64 * PI / q as f64 })
    }

    /// An angle known only numerically.
    pub fn numeric(radians: f64) -> RationalAngle {
        RationalAngle { declared: None, radians }
    }

    pub fn radians(&self) -> f64 {
        self.radians
    }

    pub fn declared(&self) -> Option<(u32, u32)> {
        self.declared
    }

    /// The declared fraction, or one reconstructed from the numeric value.
    pub fn as_rational(&self) -> Option<(u32, u32)> {
        self.declared.or_else(|| reconstruct_rational(self.radians))
    }

    pub fn class(&self) -> AngleClass {
        match self.as_rational() {
            None => AngleClass::Irrational,
            Some((1, q)) if q % 2 == 0 => AngleClass::EvenSubmultiple { k: q / 2 },
            Some((1, q)) => AngleClass::OddSubmultiple { q },
            Some((p, q)) => AngleClass::RationalOther { p, q },
        }
    }

    /// `k` with angle `pi/k`, when the angle is an integral submultiple of pi.
    pub fn submultiple(&self) -> Option<u32> {
        match self.as_rational() {
            Some((1, q)) => Some(q),
            _ => None,
        }
    }
}

/// Continued-fraction reconstruction of `radians = p*pi/q` with `q <= Q_MAX`.
pub fn reconstruct_rational(radians: f64) -> Option<(u32, u32)> {
    let x = radians / PI;
    if !(x > 0.0) || !x.is_finite() {
        return None;
    }
    // Convergents h/k of the continued fraction of x.
    let (mut h0, mut h1) = (0u64, 1u64);
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a > 1e12 {
            break;
        }
        let a_int = a as u64;
        let h2 = a_int * h1 + h0;
        let k2 = a_int * k1 + k0;
        if k2 > Q_MAX {
            break;
        }
        if (h2 as f64 * PI / k2 as f64 - radians).abs() < RATIONAL_TOL && h2 > 0 {
            let g = gcd(h2, k2);
            return Some(((h2 / g) as u32, (k2 / g) as u32));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = rest - a;
        if frac < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum AngleClass {
    /// `pi/(2k)`.
    EvenSubmultiple { k: u32 },
    /// `pi/q` with `q` odd.
    OddSubmultiple { q: u32 },
    /// `p*pi/q` with `p > 1`.
    RationalOther { p: u32, q: u32 },
    Irrational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleSummary {
    AllEvenSubmultiple,
    NoneEvenSubmultiple,
    Mixed,
    HasIrrational,
}

/// Summarize per-vertex classes.
pub fn summarize(classes: &[AngleClass]) -> AngleSummary {
    if classes.contains(&AngleClass::Irrational) {
        return AngleSummary::HasIrrational;
    }
    let even = classes.iter().filter(|c| matches!(c, AngleClass::EvenSubmultiple { .. })).count();
    if even == classes.len() {
        AngleSummary::AllEvenSubmultiple
    } else if even == 0 {
        AngleSummary::NoneEvenSubmultiple
    } else {
        AngleSummary::Mixed
    }
}
