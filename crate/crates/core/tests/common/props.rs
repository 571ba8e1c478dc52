//! Seeded randomized invariant checks. Each returns a tally so the per-module
//! tests and the acceptance run share one implementation.

use std::f64::consts::TAU;

use billiard_core::billiards::{bounce_word, simulate, SimulationError, Trajectory};
use billiard_core::hyperbolic::{self, distance, intersect, HGeodesic, HIsometry, HPoint, Intersection, IsometryChain, Tangent};
use billiard_core::polygon::LabeledPolygon;
use billiard_core::rigidity::{grammar_check, GrammarSpec};
use billiard_core::unfolding::{realizable, realizable_with_hints, verify_witness, Realizability};
use billiard_core::word::BounceWord;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{fixtures, grid_oracle, lambert_pentagon, random_interior, random_word, rng, right_pentagon, triangle_237};

#[derive(Debug, Clone)]
pub struct Tally {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
    /// Largest observed error, for tolerance-based checks.
    pub worst: f64,
}

impl Tally {
    pub fn new(name: &'static str) -> Tally {
        Tally { name, cases: 0, failures: Vec::new(), worst: 0.0 }
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn measure(&mut self, err: f64, tol: f64, what: impl FnOnce() -> String) {
        self.worst = self.worst.max(err);
        self.check(err <= tol, what);
    }

    pub fn passed(&self, min_cases: usize) -> bool {
        self.failures.is_empty() && self.cases >= min_cases
    }

    pub fn summary(&self) -> String {
        format!("{}: {} cases, {} failures, worst {:.2e}", self.name, self.cases, self.failures.len(), self.worst)
    }
}

pub fn random_point(r: &mut ChaCha8Rng, max_radius: f64) -> HPoint {
    HPoint::polar(r.random_range(0.0..max_radius), r.random_range(0.0..TAU))
}

pub fn random_line(r: &mut ChaCha8Rng) -> HGeodesic {
    let p = random_point(r, 2.0);
    let q = random_point(r, 2.0);
    hyperbolic::geodesic_through(&p, &q).unwrap()
}

/// A product of a few random rotations, translations and reflections.
pub fn random_isometry(r: &mut ChaCha8Rng) -> HIsometry {
    let mut g = HIsometry::identity();
    for _ in 0..r.random_range(1..5) {
        let step = match r.random_range(0..3) {
            0 => HIsometry::rotation(&random_point(r, 1.5), r.random_range(-3.0..3.0)),
            1 => HIsometry::translation_to(&random_point(r, 1.5)),
            _ => HIsometry::reflection(&random_line(r)),
        };
        g = g.compose(&step);
    }
    g
}

pub const ISOMETRY_TOL: f64 = 1e-8;
pub const INVOLUTION_TOL: f64 = 1e-9;
pub const REFLECTION_LAW_TOL: f64 = 1e-8;
pub const DRIFT_TOL: f64 = 1e-6;

pub fn isometry_distance(seed: u64, cases: usize) -> Tally {
    let mut t = Tally::new("isometry distance preservation");
    let mut r = rng(seed);
    for _ in 0..cases {
        let g = random_isometry(&mut r);
        let (p, q) = (random_point(&mut r, 3.0), random_point(&mut r, 3.0));
        let (d0, d1) = (distance(&p, &q), distance(&g.apply(&p), &g.apply(&q)));
        t.measure((d0 - d1).abs(), ISOMETRY_TOL, || format!("{d0} vs {d1}"));
    }
    t
}

pub fn reflection_involution(seed: u64, cases: usize) -> Tally {
    let mut t = Tally::new("reflection involutivity");
    let mut r = rng(seed);
    for _ in 0..cases {
        let line = random_line(&mut r);
        let s = HIsometry::reflection(&line);
        let err = (s.compose(&s).m - nalgebra::Matrix3::identity()).amax();
        let on = line.point_at(r.random_range(-2.0..2.0));
        let fixed = distance(&s.apply(&on), &on);
        t.measure(err.max(fixed), INVOLUTION_TOL, || format!("s^2 - I = {err}, fixed point moved {fixed}"));
    }
    t
}

pub fn chain_drift(seed: u64, cases: usize) -> Tally {
    let mut t = Tally::new("long isometry products stay Lorentz");
    let mut r = rng(seed);
    for _ in 0..cases {
        // Rotations about one off-centre point keep the product bounded while
        // every factor is a dense matrix.
        let c = random_point(&mut r, 2.0);
        let mut chain = IsometryChain::new();
        for _ in 0..10_000 {
            chain.push(&HIsometry::rotation(&c, r.random_range(-3.0..3.0)));
        }
        let drift = chain.get().drift();
        t.measure(drift, DRIFT_TOL, || format!("drift {drift}"));
    }
    t
}

/// Klein chords of two lines cross exactly when the lines meet.
pub fn klein_transversality(seed: u64, cases: usize) -> Tally {
    let mut t = Tally::new("Klein chord crossing matches line intersection");
    let mut r = rng(seed);
    for _ in 0..cases {
        let (a, b) = (random_line(&mut r), random_line(&mut r));
        let geometric = matches!(intersect(&a, &b), Intersection::Point(_));
        let chords = hyperbolic::to_klein_line(&a).crosses(&hyperbolic::to_klein_line(&b));
        let (ea, eb) = (a.ideal_endpoints(), b.ideal_endpoints());
        let near = |x: [f64; 2], y: [f64; 2]| (x[0] - y[0]).hypot(x[1] - y[1]) < 1e-9;
        let degenerate = near(ea.0, eb.0) || near(ea.0, eb.1) || near(ea.1, eb.0) || near(ea.1, eb.1);
        if degenerate {
            continue;
        }
        t.check(geometric == chords, || format!("intersect {geometric}, chords {chords}"));
    }
    t
}

fn simulate_random(poly: &LabeledPolygon, r: &mut ChaCha8Rng, bounces: usize) -> Trajectory {
    loop {
        let start = random_interior(poly, r);
        let theta = r.random_range(0.0..TAU);
        match simulate(poly, start, theta, bounces) {
            Ok(t) => return t,
            Err(SimulationError::VertexHit { .. }) => continue,
            Err(e) => panic!("{e}"),
        }
    }
}

pub fn reflection_law(seed: u64, cases: usize) -> Tally {
    let mut t = Tally::new("billiard reflection law at every event");
    let mut r = rng(seed);
    let polys = fixtures();
    for i in 0..cases {
        let (name, poly) = &polys[i % polys.len()];
        let traj = simulate_random(poly, &mut r, 30);
        let mut worst: f64 = 0.0;
        for e in &traj.events {
            let nrm = poly.side(e.side_label - 1).normal();
            let (vi, vo) = (e.incoming, e.outgoing);
            // Normal component flips, tangential component is kept, speed is one.
            let normal = (hyperbolic::q(&vi, &nrm) + hyperbolic::q(&vo, &nrm)).abs();
            let tangential = ((vi - hyperbolic::q(&vi, &nrm) * nrm) - (vo - hyperbolic::q(&vo, &nrm) * nrm)).amax();
            let unit = (hyperbolic::q(&vo, &vo) - 1.0).abs();
            let on_side = poly.side(e.side_label - 1).side_value(&e.hit_point).abs();
            worst = worst.max(normal).max(tangential).max(unit).max(on_side);
        }
        t.measure(worst, REFLECTION_LAW_TOL, || format!("{name}: error {worst}"));
    }
    t
}

pub fn no_immediate_repeats(seed: u64, cases: usize) -> Tally {
    let mut t = Tally::new("simulated words never repeat a label");
    let mut r = rng(seed);
    let polys = fixtures();
    for i in 0..cases {
        let (name, poly) = &polys[i % polys.len()];
        let w = bounce_word(&simulate_random(poly, &mut r, 60));
        t.check(w.immediate_repeat().is_none(), || format!("{name}: {w}"));
    }
    t
}

/// Reversing the velocity midway between two bounces retraces the word.
pub fn time_reversal(seed: u64, cases: usize) -> Tally {
    let mut t = Tally::new("time reversal retraces the word");
    let mut r = rng(seed);
    let polys = fixtures();
    for i in 0..cases {
        let (name, poly) = &polys[i % polys.len()];
        let n = 10;
        let traj = simulate_random(poly, &mut r, n + 1);
        let (a, b) = (&traj.events[n - 1], &traj.events[n]);
        let mid = hyperbolic::midpoint(&a.hit_point, &b.hit_point);
        let back = Tangent::toward(mid, &a.hit_point).unwrap();
        let Ok(rev) = billiard_core::billiards::simulate_tangent(poly, back, n) else {
            t.check(false, || format!("{name}: reversed orbit hit a vertex"));
            continue;
        };
        let fwd = bounce_word(&traj).prefix(n);
        let ok = bounce_word(&rev) == fwd.reversed()
            && rev.events.iter().rev().zip(&traj.events).all(|(x, y)| distance(&x.hit_point, &y.hit_point) < 1e-6);
        t.check(ok, || format!("{name}: {fwd} vs {}", bounce_word(&rev)));
    }
    t
}

/// Relabeling the polygon relabels the word; moving it by an isometry
/// changes nothing.
pub fn label_and_isometry_equivariance(seed: u64, cases: usize) -> Tally {
    let mut t = Tally::new("label and isometry equivariance");
    let mut r = rng(seed);
    let polys = fixtures();
    for i in 0..cases {
        let (name, poly) = &polys[i % polys.len()];
        let n = poly.n();
        let start = random_interior(poly, &mut r);
        let theta = r.random_range(0.0..TAU);
        let Ok(traj) = simulate(poly, start, theta, 12) else { continue };
        let w = bounce_word(&traj);
        let shift = r.random_range(1..n);
        let moved = poly.relabeled(shift);
        let w2 = simulate(&moved, start, theta, 12).map(|x| bounce_word(&x));
        let mut g = random_isometry(&mut r);
        if g.orientation == -1 {
            g = g.compose(&HIsometry::reflection(&random_line(&mut r)));
        }
        let image = poly.transformed(&g);
        let w3 = billiard_core::billiards::simulate_tangent(&image, g.apply_tangent(&Tangent::from_angle(start, theta)), 12)
            .map(|x| bounce_word(&x));
        let ok = w2.as_ref().is_ok_and(|x| *x == w.shifted(n - shift, n)) && w3.as_ref().is_ok_and(|x| *x == w);
        t.check(ok, || format!("{name}: {w} -> {w2:?} / {w3:?}"));
    }
    t
}

pub fn self_realizability(seed: u64, cases: usize) -> Tally {
    let mut t = Tally::new("simulated words are realizable (grazing excluded)");
    let mut r = rng(seed);
    let polys = fixtures();
    let mut i = 0;
    while t.cases < cases {
        let (name, poly) = &polys[i % polys.len()];
        i += 1;
        let len = r.random_range(5..=40);
        let traj = simulate_random(poly, &mut r, len);
        let word = bounce_word(&traj);
        match realizable_with_hints(poly, &word, &[traj.start.geodesic()]) {
            Ok(Realizability::Yes { witness }) => {
                let ok = verify_witness(poly, &word, &witness);
                t.check(ok, || format!("{name} {word}: witness does not verify"));
            }
            Ok(Realizability::Grazing { .. }) => {}
            other => t.check(false, || format!("{name} {word}: {other:?}")),
        }
    }
    t
}

pub fn reversal_symmetry(seed: u64, cases: usize) -> Tally {
    let mut t = Tally::new("realizability is reversal symmetric");
    let mut r = rng(seed);
    let polys = fixtures();
    for i in 0..cases {
        let (name, poly) = &polys[i % polys.len()];
        let word = random_word(poly.n(), r.random_range(1..=10), &mut r);
        let a = realizable(poly, &word).unwrap();
        let b = realizable(poly, &word.reversed()).unwrap();
        let same = std::mem::discriminant(&a) == std::mem::discriminant(&b);
        t.check(same, || format!("{name} {word}: {a:?} vs {b:?}"));
    }
    t
}

/// Margin below which neither method's verdict is compared.
pub const ORACLE_MARGIN: f64 = 1e-6;

/// Exact realizability against the brute-force grid search, words of length
/// at most four. Returns the tally and the number of ambiguous skips.
pub fn grid_agreement(seed: u64, cases: usize) -> (Tally, usize) {
    let mut t = Tally::new("endpoint search agrees with grid oracle (m <= 4)");
    let mut r = rng(seed);
    let polys = fixtures();
    let mut skipped = 0;
    let mut i = 0;
    while t.cases < cases {
        let (name, poly) = &polys[i % polys.len()];
        i += 1;
        let word = random_word(poly.n(), r.random_range(1..=4), &mut r);
        if let Some(ok) = agrees_with_oracle(poly, &word) {
            t.check(ok, || format!("{name} {word}"));
        } else {
            skipped += 1;
        }
    }
    (t, skipped)
}

/// `None` when either side is within the ambiguity margin.
pub fn agrees_with_oracle(poly: &LabeledPolygon, word: &BounceWord) -> Option<bool> {
    let ours = realizable(poly, word).ok()?;
    let oracle = grid_oracle(poly, word);
    let ambiguous = match &ours {
        Realizability::Grazing { .. } => true,
        Realizability::Yes { witness } => witness.margin < ORACLE_MARGIN,
        Realizability::No { .. } => false,
    } || oracle.margin.abs() < ORACLE_MARGIN;
    if ambiguous {
        None
    } else {
        Some(ours.is_yes() == oracle.feasible)
    }
}

pub fn grammar_admissibility(seed: u64, cases: usize) -> Tally {
    let mut t = Tally::new("simulated words on good polygons are admissible");
    let mut r = rng(seed);
    let good = [
        ("right_pentagon", right_pentagon()),
        ("triangle_237", triangle_237()),
        ("lambert_pentagon", lambert_pentagon(0.8)),
        ("third_pentagon", super::third_pentagon(2.0, 2.2)),
    ];
    for i in 0..cases {
        let (name, poly) = &good[i % good.len()];
        let spec = GrammarSpec::from_polygon(poly).unwrap();
        let w = bounce_word(&simulate_random(poly, &mut r, 60));
        t.check(grammar_check(&spec, &w).is_admissible(), || format!("{name}: {w}"));
    }
    t
}
