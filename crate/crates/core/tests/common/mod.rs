//! Shared fixtures and the brute-force grid oracle.
#![allow(dead_code)]

pub mod covers;
pub mod props;

use std::f64::consts::{PI, TAU};

use billiard_core::hyperbolic::{self, HIsometry, HPoint};
use billiard_core::polygon::{build_regular, solve_closure, DeformationParams, LabeledPolygon, RationalAngle};
use billiard_core::word::BounceWord;
use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn angle(p: u32, q: u32) -> RationalAngle {
    RationalAngle::pi_frac(p, q).unwrap()
}

pub fn closed(angles: Vec<RationalAngle>, free: Vec<f64>) -> LabeledPolygon {
    solve_closure(&DeformationParams { target_angles: angles, free_lengths: free }, None).unwrap().polygon
}

pub fn right_pentagon() -> LabeledPolygon {
    build_regular(5, angle(1, 2)).unwrap()
}

pub fn right_pentagon_with(a: f64, b: f64) -> LabeledPolygon {
    closed(vec![angle(1, 2); 5], vec![a, b])
}

pub fn third_pentagon(a: f64, b: f64) -> LabeledPolygon {
    closed(vec![angle(1, 3); 5], vec![a, b])
}

pub fn triangle_237() -> LabeledPolygon {
    closed(vec![angle(1, 2), angle(1, 3), angle(1, 7)], vec![])
}

pub fn right_hexagon() -> LabeledPolygon {
    build_regular(6, angle(1, 2)).unwrap()
}

/// Quadrilateral with one angle of 1 radian (not a rational multiple of π).
pub fn irrational_quad() -> LabeledPolygon {
    closed(vec![RationalAngle::numeric(1.0), angle(1, 2), angle(1, 2), angle(1, 2)], vec![1.2])
}

/// Hexagon mixing even and odd submultiples.
pub fn mixed_hexagon() -> LabeledPolygon {
    closed(vec![angle(1, 2), angle(1, 3), angle(1, 2), angle(1, 3), angle(1, 2), angle(1, 4)], vec![2.0, 2.2, 1.8])
}

/// Pentagon with angles (pi/2, pi/3, pi/2, pi/2, pi/2): two copies of a
/// Lambert quadrilateral glued along the side opposite its acute angle.
pub fn lambert_pentagon(a: f64) -> LabeledPolygon {
    let b = ((PI / 6.0).cos() / a.sinh()).asinh();
    let o = HPoint::origin();
    let pa = HPoint::from_klein(a.tanh(), 0.0).unwrap();
    let pb = HPoint::from_klein(0.0, b.tanh()).unwrap();
    let pc = HPoint::from_klein(a.tanh(), b.tanh()).unwrap();
    let r = HIsometry::reflection(&hyperbolic::geodesic_through(&pb, &pc).unwrap());
    LabeledPolygon::from_vertices(vec![o, pa, pc, r.apply(&pa), r.apply(&o)])
        .unwrap()
        .with_declared_angles(&[Some((1, 2)), Some((1, 3)), Some((1, 2)), Some((1, 2)), Some((1, 2))])
        .unwrap()
}

pub fn fixtures() -> Vec<(&'static str, LabeledPolygon)> {
    vec![
        ("right_pentagon", right_pentagon()),
        ("right_pentagon_0.9_1.2", right_pentagon_with(0.9, 1.2)),
        ("third_pentagon", third_pentagon(2.0, 2.2)),
        ("triangle_237", triangle_237()),
        ("right_hexagon", right_hexagon()),
        ("irrational_quad", irrational_quad()),
        ("mixed_hexagon", mixed_hexagon()),
    ]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the Klein bounding box that lies well inside `poly`.
pub fn random_interior(poly: &LabeledPolygon, rng: &mut ChaCha8Rng) -> HPoint {
    poly.sample_interior(rng, 1e-3)
}

pub fn random_word(n: usize, len: usize, rng: &mut ChaCha8Rng) -> BounceWord {
    let mut w: Vec<usize> = Vec::with_capacity(len);
    while w.len() < len {
        let l = rng.random_range(1..=n);
        if w.last() != Some(&l) {
            w.push(l);
        }
    }
    BounceWord(w)
}

/// Outcome of the brute-force search.
#[derive(Debug, Clone, Copy)]
pub struct OracleVerdict {
    pub feasible: bool,
    /// Best hyperbolic clearance found (negative when infeasible).
    pub margin: f64,
}

fn reflect_list(verts: &[Vector3<f64>], k: usize) -> Vec<Vector3<f64>> {
    let n = verts.len();
    let nrm = hyperbolic::j_cross(&verts[k], &verts[(k + 1) % n]);
    let nrm = nrm / hyperbolic::q(&nrm, &nrm).sqrt();
    verts.iter().map(|v| v - 2.0 * hyperbolic::q(v, &nrm) * nrm).collect()
}

/// Gate segments (Klein coordinates) of the unfolding in copy 0's frame,
/// built by repeatedly reflecting the vertex list in the exit side.
pub fn oracle_gates(poly: &LabeledPolygon, word: &BounceWord) -> Vec<([f64; 2], [f64; 2])> {
    let mut verts: Vec<Vector3<f64>> = poly.vertices().iter().map(|v| v.vec()).collect();
    let n = verts.len();
    let mut gates = Vec::new();
    for &l in word.letters() {
        let k = l - 1;
        let (a, b) = (verts[k], verts[(k + 1) % n]);
        gates.push(([a.x / a.z, a.y / a.z], [b.x / b.z, b.y / b.z]));
        verts = reflect_list(&verts, k);
    }
    gates
}

struct Probe {
    clearance: f64,
    ordered: bool,
}

/// Line `{k : k·ν = u}` with ν = (cos φ, sin φ), travelling along τ = ν⊥.
fn probe(gates: &[([f64; 2], [f64; 2])], phi: f64, u: f64) -> Probe {
    let (s, c) = phi.sin_cos();
    let scale = (1.0 - u * u).sqrt();
    let mut clearance = f64::INFINITY;
    let mut last = f64::NEG_INFINITY;
    let mut ordered = true;
    for (a, b) in gates {
        let side = |p: &[f64; 2]| {
            let z = 1.0 / (1.0 - p[0] * p[0] - p[1] * p[1]).sqrt();
            z * (p[0] * c + p[1] * s - u) / scale
        };
        let (sa, sb) = (side(a), side(b));
        let cl = if sa * sb < 0.0 { sa.abs().min(sb.abs()).asinh() } else { -(sa.abs().min(sb.abs())).asinh() };
        clearance = clearance.min(cl);
        // Crossing point and its position along τ.
        let ka = a[0] * c + a[1] * s - u;
        let kb = b[0] * c + b[1] * s - u;
        if ka != kb {
            let t = ka / (ka - kb);
            let x = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            let pos = -x[0] * s + x[1] * c;
            if !(pos > last) {
                ordered = false;
            }
            last = pos;
        }
    }
    Probe { clearance, ordered }
}

/// Feasible offset interval (Klein units) for direction φ.
fn offset_interval(gates: &[([f64; 2], [f64; 2])], phi: f64) -> (f64, f64) {
    let (s, c) = phi.sin_cos();
    let mut lo: f64 = -1.0;
    let mut hi: f64 = 1.0;
    for (a, b) in gates {
        let pa = a[0] * c + a[1] * s;
        let pb = b[0] * c + b[1] * s;
        lo = lo.max(pa.min(pb));
        hi = hi.min(pa.max(pb));
    }
    (lo, hi)
}

fn best_offset(gates: &[([f64; 2], [f64; 2])], phi: f64) -> (f64, Probe) {
    let (lo, hi) = offset_interval(gates, phi);
    if !(hi > lo) {
        let u = ((lo + hi) / 2.0).clamp(-0.999_999, 0.999_999);
        return (u, probe(gates, phi, u));
    }
    // Clearance is unimodal in the offset: ternary search.
    let (mut a, mut b) = (lo, hi);
    for _ in 0..100 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if probe(gates, phi, m1).clearance < probe(gates, phi, m2).clearance {
            a = m1;
        } else {
            b = m2;
        }
    }
    let u = (a + b) / 2.0;
    (u, probe(gates, phi, u))
}

/// Dense search over lines for one crossing every gate in order: 10^4
/// directions with the exact feasible offset interval for each, then local
/// refinement of the best directions.
pub fn grid_oracle(poly: &LabeledPolygon, word: &BounceWord) -> OracleVerdict {
    if word.immediate_repeat().is_some() {
        return OracleVerdict { feasible: false, margin: f64::NEG_INFINITY };
    }
    let gates = oracle_gates(poly, word);
    if gates.is_empty() {
        return OracleVerdict { feasible: true, margin: f64::INFINITY };
    }
    const DIRS: usize = 10_000;
    let mut scored: Vec<(f64, f64)> = (0..DIRS)
        .map(|j| {
            let phi = TAU * j as f64 / DIRS as f64;
            let (lo, hi) = offset_interval(&gates, phi);
            (hi - lo, phi)
        })
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let step = TAU / DIRS as f64;
    let mut best = OracleVerdict { feasible: false, margin: f64::NEG_INFINITY };
    for &(_, phi0) in scored.iter().take(8) {
        let eval = |phi: f64| {
            let (_, p) = best_offset(&gates, phi);
            if p.ordered {
                p.clearance
            } else {
                f64::NEG_INFINITY
            }
        };
        let (mut a, mut b) = (phi0 - 2.0 * step, phi0 + 2.0 * step);
        for _ in 0..80 {
            let m1 = a + (b - a) / 3.0;
            let m2 = b - (b - a) / 3.0;
            if eval(m1) < eval(m2) {
                a = m1;
            } else {
                b = m2;
            }
        }
        for phi in [phi0, (a + b) / 2.0] {
            let m = eval(phi);
            if m > best.margin {
                best = OracleVerdict { feasible: m > 0.0, margin: m };
            }
        }
    }
    best
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() < tol
}

pub const HALF_PI: f64 = PI / 2.0;
