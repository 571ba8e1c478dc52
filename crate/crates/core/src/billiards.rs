//! Billiard trajectories inside a labeled polygon.
//!
//! The state is a unit tangent `(p, t)`; the geodesic is
//! `γ(s) = cosh(s) p + sinh(s) t`. It meets the line with normal `n` where
//! `tanh(s) = -Q(p,n) / Q(t,n)`, so each event is found in closed form.

use nalgebra::Vector3;
use serde::Serialize;
use thiserror::Error;

use crate::hyperbolic::{self, common_perpendicular as line_perpendicular, distance, HPoint, Tangent};
use crate::polygon::LabeledPolygon;
use crate::word::BounceWord;

/// Hits closer than this to a vertex are flagged.
pub const EPS_VERTEX: f64 = 1e-8;
/// Smallest travel time accepted for the next event.
pub const MIN_TRAVEL: f64 = 1e-10;
/// Bounces between re-projections of the state onto the hit side.
pub const REPROJECT_EVERY: usize = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimulationError {
    #[error("start point is not strictly inside the polygon")]
    NotInterior,
    #[error("trajectory hit a vertex at bounce {step}")]
    VertexHit { step: usize, partial: Box<Trajectory> },
    #[error("trajectory left the polygon without meeting a side at bounce {step}")]
    Escaped { step: usize },
    #[error("side label {0} does not exist")]
    BadLabel(usize),
    #[error("sides {0} and {1} must be distinct and non-adjacent")]
    NotOpposite(usize, usize),
    #[error("the lines of sides {0} and {1} are not ultraparallel")]
    NotUltraparallel(usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BounceEvent {
    pub side_label: usize,
    pub hit_point: HPoint,
    /// Fraction of the side's length from its first vertex to the hit.
    pub arc_param: f64,
    /// Cumulative hyperbolic length travelled.
    pub time: f64,
    /// Unit velocity arriving at the side.
    pub incoming: Vector3<f64>,
    /// Unit velocity leaving the side.
    pub outgoing: Vector3<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub start: Tangent,
    pub events: Vec<BounceEvent>,
}

impl Trajectory {
    /// Tangent leaving the last event (or the start if there is none).
    pub fn final_tangent(&self) -> Tangent {
        match self.events.last() {
            Some(e) => Tangent { base: e.hit_point, dir: e.outgoing },
            None => self.start,
        }
    }
}

pub fn bounce_word(traj: &Trajectory) -> BounceWord {
    BounceWord(traj.events.iter().map(|e| e.side_label).collect())
}

/// Position of `h` on the Klein segment `ab` (0 at `a`, 1 at `b`).
fn klein_lambda(a: &HPoint, b: &HPoint, h: &HPoint) -> f64 {
    let (a, b, h) = (a.to_klein(), b.to_klein(), h.to_klein());
    let d = [b[0] - a[0], b[1] - a[1]];
    ((h[0] - a[0]) * d[0] + (h[1] - a[1]) * d[1]) / (d[0] * d[0] + d[1] * d[1])
}

struct Hit {
    side: usize,
    s: f64,
    point: HPoint,
}

/// First side met by the geodesic leaving `tan`, ignoring side `skip`.
fn next_hit(poly: &LabeledPolygon, tan: &Tangent, skip: Option<usize>) -> Option<Hit> {
    let p = tan.base.vec();
    let mut best: Option<Hit> = None;
    for k in 0..poly.n() {
        if Some(k) == skip {
            continue;
        }
        let nrm = poly.side(k).normal();
        let c = hyperbolic::q(&p, &nrm);
        let d = hyperbolic::q(&tan.dir, &nrm);
        if d == 0.0 {
            continue;
        }
        let th = -c / d;
        if !(th > 0.0 && th < 1.0) {
            continue;
        }
        let s = th.atanh();
        if s <= MIN_TRAVEL || best.as_ref().is_some_and(|b| b.s <= s) {
            continue;
        }
        let point = tan.point_at(s);
        let (a, b) = poly.side_segment(k);
        let lam = klein_lambda(&a, &b, &point);
        if !(-1e-12..=1.0 + 1e-12).contains(&lam) {
            continue;
        }
        best = Some(Hit { side: k, s, point });
    }
    best
}

/// Simulate from `start` in direction `theta` (see [`Tangent::from_angle`]).
pub fn simulate(poly: &LabeledPolygon, start: HPoint, theta: f64, bounces: usize) -> Result<Trajectory, SimulationError> {
    simulate_tangent(poly, Tangent::from_angle(start, theta), bounces)
}

pub fn simulate_tangent(poly: &LabeledPolygon, start: Tangent, bounces: usize) -> Result<Trajectory, SimulationError> {
    if !poly.contains(&start.base) || poly.distance_to_boundary(&start.base) <= EPS_VERTEX {
        return Err(SimulationError::NotInterior);
    }
    let mut traj = Trajectory { start, events: Vec::with_capacity(bounces) };
    let mut tan = start;
    let mut last: Option<usize> = None;
    let mut time = 0.0;
    for step in 1..=bounces {
        let hit = next_hit(poly, &tan, last).ok_or(SimulationError::Escaped { step })?;
        let (a, b) = poly.side_segment(hit.side);
        if distance(&hit.point, &a) < EPS_VERTEX || distance(&hit.point, &b) < EPS_VERTEX {
            return Err(SimulationError::VertexHit { step, partial: Box::new(traj) });
        }
        let side = poly.side(hit.side);
        let mut point = hit.point;
        if step % REPROJECT_EVERY == 0 {
            point = side.foot(&point);
        }
        let incoming = tan.advanced(hit.s);
        let v = incoming.dir;
        let nrm = side.normal();
        let out = Tangent { base: point, dir: v - 2.0 * hyperbolic::q(&v, &nrm) * nrm }.renormalized();
        time += hit.s;
        traj.events.push(BounceEvent {
            side_label: hit.side + 1,
            hit_point: point,
            arc_param: distance(&a, &point) / distance(&a, &b),
            time,
            incoming: v,
            outgoing: out.dir,
        });
        tan = out;
        last = Some(hit.side);
    }
    Ok(traj)
}

/// Common perpendicular of the lines of two sides, as a periodic-orbit seed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerpendicularSeed {
    pub foot_i: [f64; 2],
    pub foot_j: [f64; 2],
    pub length: f64,
    /// Both feet lie on the open sides (so the two-periodic orbit exists).
    pub valid: bool,
}

impl PerpendicularSeed {
    pub fn feet(&self) -> (HPoint, HPoint) {
        (
            HPoint::from_klein(self.foot_i[0], self.foot_i[1]).expect("foot inside the disk"),
            HPoint::from_klein(self.foot_j[0], self.foot_j[1]).expect("foot inside the disk"),
        )
    }

    /// Tangent at the midpoint heading to the foot on side `j`.
    pub fn start(&self) -> Tangent {
        let (a, b) = self.feet();
        let m = hyperbolic::midpoint(&a, &b);
        Tangent::toward(m, &b).expect("feet are distinct")
    }
}

pub fn common_perpendicular(poly: &LabeledPolygon, i: usize, j: usize) -> Result<PerpendicularSeed, SimulationError> {
    let n = poly.n();
    for l in [i, j] {
        if l == 0 || l > n {
            return Err(SimulationError::BadLabel(l));
        }
    }
    let (a, b) = (i - 1, j - 1);
    if a == b || (a + 1) % n == b || (b + 1) % n == a {
        return Err(SimulationError::NotOpposite(i, j));
    }
    let (_, fi, fj) =
        line_perpendicular(poly.side(a), poly.side(b)).ok_or(SimulationError::NotUltraparallel(i, j))?;
    let on_side = |k: usize, f: &HPoint| {
        let (p, q) = poly.side_segment(k);
        let lam = klein_lambda(&p, &q, f);
        lam > 0.0 && lam < 1.0 && distance(f, &p) > EPS_VERTEX && distance(f, &q) > EPS_VERTEX
    };
    Ok(PerpendicularSeed {
        foot_i: fi.to_klein(),
        foot_j: fj.to_klein(),
        length: distance(&fi, &fj),
        valid: on_side(a, &fi) && on_side(b, &fj),
    })
}
