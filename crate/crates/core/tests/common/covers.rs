//! Generator of numerically consistent branched-cover data.

use billiard_core::cone::{bound_check, orbifold_area, validate_cover, Angle, BranchedCoverData, ConeSurfaceData, OrbifoldSignature, Preimage};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::props::Tally;
use super::rng;

/// Split `d` into local degrees over an order-`b` point: parts equal to `b`
/// are regular, parts above `b` are cone points (even `b` only).
fn random_fiber(d: u32, b: u32, r: &mut ChaCha8Rng) -> Option<Vec<u32>> {
    let mut rest = d;
    let mut parts = Vec::new();
    while rest > 0 {
        let can_regular = rest == b || rest >= 2 * b;
        let cone_ok = b.is_multiple_of(2) && rest > b;
        if can_regular && (!cone_ok || r.random_bool(0.6)) {
            parts.push(b);
            rest -= b;
        } else if cone_ok {
            // Leave a remainder that is either empty or at least `b`.
            let choices: Vec<u32> = (b + 1..=rest).filter(|e| rest - e == 0 || rest - e >= b).collect();
            let e = choices[r.random_range(0..choices.len())];
            parts.push(e);
            rest -= e;
        } else {
            return None;
        }
    }
    Some(parts)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A cover whose numerical data satisfy every local and global constraint,
/// with the surface genus forced by Riemann-Hurwitz.
pub fn random_cover(r: &mut ChaCha8Rng) -> Option<BranchedCoverData> {
    let h = r.random_range(0..2u32);
    let m = r.random_range(1..6usize);
    let orders: Vec<u32> = (0..m).map(|_| r.random_range(2..9)).collect();
    let orbifold = OrbifoldSignature::new(h, orders.clone());
    orbifold_area(&orbifold).ok()?;
    let odd_lcm = orders.iter().filter(|b| *b % 2 == 1).fold(1, |l, &b| l / gcd(l, b) * b);
    let max_b = *orders.iter().max().unwrap();
    let mut d = odd_lcm * r.random_range(1..4);
    while d < max_b {
        d += odd_lcm;
    }
    if d > 200 {
        return None;
    }
    let mut angles = Vec::new();
    let mut fibers = Vec::new();
    let mut ramification = 0i64;
    for &b in &orders {
        let parts = random_fiber(d, b, r)?;
        let mut fiber = Vec::new();
        for e in parts {
            ramification += e as i64 - 1;
            if e == b {
                fiber.push(Preimage { local_degree: e, cone_point: None });
            } else {
                fiber.push(Preimage { local_degree: e, cone_point: Some(angles.len()) });
                angles.push(Angle::pi(2 * e as i64, b as i64));
            }
        }
        fibers.push(fiber);
    }
    let chi = d as i64 * (2 - 2 * h as i64) - ramification;
    if chi % 2 != 0 || chi > -2 {
        return None;
    }
    let genus = ((2 - chi) / 2) as u32;
    Some(BranchedCoverData { surface: ConeSurfaceData { genus, cone_angles: angles }, orbifold, degree: d, fibers })
}

/// Validate `cases` generated covers that have cone points and check the bound.
pub fn cover_fuzz(seed: u64, cases: usize) -> Tally {
    let mut t = Tally::new("cover fuzz: bound_check holds");
    let mut r = rng(seed);
    while t.cases < cases {
        let Some(cover) = random_cover(&mut r) else { continue };
        if cover.surface.cone_angles.is_empty() {
            continue;
        }
        let ok = validate_cover(&cover).is_ok() && bound_check(&cover).is_ok_and(|b| b.holds);
        t.check(ok, || format!("{cover:?}"));
    }
    t
}
