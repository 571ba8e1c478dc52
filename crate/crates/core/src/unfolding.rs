//! Unfolding a polygon along a bounce word, and deciding realizability.
//!
//! Copy `i` of the corridor is `g_i(P)` with `g_0 = id` and
//! `g_i = g_{i-1} ∘ ρ_{b_i}`, where `ρ_b` is the reflection in side `b` of
//! `P`. Gate `E_i = g_{i-1}(side b_i)` is the edge shared by copies `i-1` and
//! `i`. A word is realized by a billiard trajectory exactly when one line
//! crosses every gate, in order, through the gate's interior.
//!
//! The side condition at gate `i` is linear in the line normal `n`: its left
//! endpoint `L_i` must satisfy `Q(n, L_i) > 0` and its right endpoint
//! `Q(n, R_i) < 0`. The feasible normals form a convex cone whose extreme rays
//! are lines through two gate endpoints, so trying every endpoint pair (in
//! both orientations) finds a feasible line whenever one exists.
//!
//! Far copies of a long corridor have huge coordinates, so all corridor
//! arithmetic is double-double, in the frame of the copy closest to the
//! corridor's middle. Margins are hyperbolic distances, which do not depend
//! on the frame.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::hyperbolic::dd::{Dd, DdMat3, DdVec3};
use crate::hyperbolic::{HGeodesic, HIsometry, HPoint, KleinChord};
use crate::polygon::LabeledPolygon;
use crate::word::{BounceWord, WordError};

/// Minimal clearance (hyperbolic distance from every gate endpoint) for a
/// strict crossing.
pub const EPS_GATE: f64 = 1e-9;
/// Slack for "closed" feasibility (touching an endpoint is allowed); also
/// the clearance below which a line counts as passing through a vertex.
pub const CLOSED_TOL: f64 = 1e-11;
/// Longest word accepted by [`enumerate_diagonals`].
pub const MAX_DIAGONAL_LEN: usize = 12;
/// Largest `cosh` of the distance from the working frame to a corridor
/// vertex for which double-double evaluation still resolves `CLOSED_TOL`.
pub const MAX_REACH: f64 = 1e19;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UnfoldError {
    #[error("word repeats a label at position {position}")]
    ImmediateRepeat { position: usize },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("max_len {requested} exceeds the budget of {limit}")]
    BudgetExceeded { requested: usize, limit: usize },
    #[error("corridor reaches cosh-distance {reach:e} from its middle; double-double cannot resolve it")]
    PrecisionExceeded { reach: f64 },
}

/// Why a word is not realizable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NoReason {
    ImmediateRepeat,
    NoTransversal,
    /// Lines cross every gate but never in the word's order.
    OrderViolation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransversalWitness {
    /// Index of the copy whose coordinates the chord and normal are in.
    pub frame_copy: usize,
    /// Unit normal as double-double `[hi, lo]` pairs.
    pub normal: [[f64; 2]; 3],
    /// The full line as a Klein chord between its ideal endpoints.
    #[serde(serialize_with = "ser_chord")]
    pub chord: KleinChord,
    /// Signed arc length of the crossing with each gate; strictly increasing.
    pub crossing_params: Vec<f64>,
    /// Smallest hyperbolic distance from a gate endpoint to the line.
    pub margin: f64,
}

fn ser_chord<S: serde::Serializer>(c: &KleinChord, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("KleinChord", 2)?;
    st.serialize_field("a", &c.a)?;
    st.serialize_field("b", &c.b)?;
    st.end()
}

impl TransversalWitness {
    pub fn normal_dd(&self) -> DdVec3 {
        DdVec3(self.normal.map(|[hi, lo]| Dd { hi, lo }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Realizability {
    Yes { witness: TransversalWitness },
    No { reason: NoReason },
    /// A line touches the closure of every gate but none clears them by
    /// `EPS_GATE`; the answer depends on the tolerance.
    Grazing { margin: f64 },
}

impl Realizability {
    pub fn is_yes(&self) -> bool {
        matches!(self, Realizability::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Realizability::No { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Diagonal {
    Yes {
        /// Vertex of copy 0; vertex `i` starts side `i`.
        from_vertex: usize,
        /// Vertex of copy `m`, same numbering.
        to_vertex: usize,
        frame_copy: usize,
        #[serde(serialize_with = "ser_chord")]
        chord: KleinChord,
        margin: f64,
    },
    No,
}

impl Diagonal {
    pub fn is_yes(&self) -> bool {
        matches!(self, Diagonal::Yes { .. })
    }
}

#[derive(Clone, Debug)]
struct Gate {
    left: DdVec3,
    right: DdVec3,
}

/// A word unfolded into a chain of reflected copies.
#[derive(Clone, Debug)]
pub struct Corridor {
    pub word: BounceWord,
    /// Copy whose coordinates are used.
    pub frame_copy: usize,
    /// `h_i`: maps `P` onto copy `i`, in frame coordinates.
    copies: Vec<DdMat3>,
    poly_vertices: Vec<DdVec3>,
    gates: Vec<Gate>,
    /// Largest `z` (cosh of the distance to the frame origin) of a vertex.
    pub reach: f64,
}

/// Double-double vertices of `P` and the reflections in its sides.
fn polygon_dd(poly: &LabeledPolygon) -> (Vec<DdVec3>, Vec<DdMat3>) {
    let verts: Vec<DdVec3> = poly.vertices().iter().map(|v| DdVec3::from_f64([v.x, v.y, v.z])).collect();
    let n = verts.len();
    let refl = (0..n)
        .map(|k| {
            let nrm = verts[k].j_cross(&verts[(k + 1) % n]).normalized_spacelike().expect("distinct vertices");
            DdMat3::reflection(&nrm)
        })
        .collect();
    (verts, refl)
}

fn orientation(i: usize, frame: usize) -> i8 {
    if i.abs_diff(frame).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn build_copies(refl: &[DdMat3], word: &[usize], frame: usize) -> Vec<DdMat3> {
    let m = word.len();
    let mut h = vec![DdMat3::identity(); m + 1];
    for i in frame + 1..=m {
        h[i] = h[i - 1].mul(&refl[word[i - 1] - 1]);
    }
    for i in (0..frame).rev() {
        h[i] = h[i + 1].mul(&refl[word[i] - 1]);
    }
    h
}

fn check_word(poly: &LabeledPolygon, word: &BounceWord) -> Result<(), UnfoldError> {
    word.check_alphabet(poly.n())?;
    if let Some(position) = word.immediate_repeat() {
        return Err(UnfoldError::ImmediateRepeat { position });
    }
    Ok(())
}

/// Unfold `poly` along `word`.
pub fn unfold(poly: &LabeledPolygon, word: &BounceWord) -> Result<Corridor, UnfoldError> {
    check_word(poly, word)?;
    let (verts, refl) = polygon_dd(poly);
    let m = word.len();
    let letters = word.letters();
    let n = verts.len();
    let centroid = {
        let c = poly.centroid();
        DdVec3::from_f64([c.x, c.y, c.z])
    };

    // First pass in the index-middle frame to locate the copy nearest the
    // metric middle of the corridor.
    let mid = m / 2;
    let h = build_copies(&refl, letters, mid);
    let frame = if m >= 2 {
        let cs: Vec<DdVec3> = h.iter().map(|g| g.apply(&centroid)).collect();
        let dist = |a: &DdVec3, b: &DdVec3| (-a.q(b)).to_f64().max(1.0).acosh();
        (0..=m)
            .min_by(|&i, &j| {
                let fi = dist(&cs[i], &cs[0]).max(dist(&cs[i], &cs[m]));
                let fj = dist(&cs[j], &cs[0]).max(dist(&cs[j], &cs[m]));
                fi.total_cmp(&fj)
            })
            .unwrap_or(mid)
    } else {
        mid
    };
    let copies = if frame == mid { h } else { build_copies(&refl, letters, frame) };

    let mut gates = Vec::with_capacity(m);
    let mut reach: f64 = 1.0;
    for i in 1..=m {
        let k = letters[i - 1] - 1;
        let g = &copies[i - 1];
        let a = g.apply(&verts[k]);
        let b = g.apply(&verts[(k + 1) % n]);
        reach = reach.max(a.0[2].to_f64()).max(b.0[2].to_f64());
        let gate = if orientation(i - 1, frame) == 1 { Gate { left: b, right: a } } else { Gate { left: a, right: b } };
        gates.push(gate);
    }
    for g in [&copies[0], &copies[m]] {
        for v in &verts {
            reach = reach.max(g.apply(v).0[2].to_f64());
        }
    }
    Ok(Corridor { word: word.clone(), frame_copy: frame, copies, poly_vertices: verts, gates, reach })
}

fn to_point(v: &DdVec3) -> HPoint {
    let [x, y, z] = v.to_f64();
    HPoint::from_vector(&nalgebra::Vector3::new(x, y, z)).unwrap_or(HPoint { x, y, z })
}

impl Corridor {
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Gate chords in frame coordinates.
    pub fn gate_chords(&self) -> Vec<KleinChord> {
        self.gates.iter().map(|g| KleinChord::between(&to_point(&g.right), &to_point(&g.left))).collect()
    }

    /// Vertices of copy `i` in frame coordinates.
    pub fn copy_vertices(&self, i: usize) -> Vec<HPoint> {
        self.poly_vertices.iter().map(|v| to_point(&self.copies[i].apply(v))).collect()
    }

    pub fn vertices0(&self) -> Vec<HPoint> {
        self.copy_vertices(0)
    }

    pub fn vertices_m(&self) -> Vec<HPoint> {
        self.copy_vertices(self.copies.len() - 1)
    }

    /// `g_i` relative to copy 0 (`g_0 = id`); rounded to `f64`.
    pub fn copy_isometry(&self, i: usize) -> HIsometry {
        let j = DdMat3([
            [Dd::ONE, Dd::ZERO, Dd::ZERO],
            [Dd::ZERO, Dd::ONE, Dd::ZERO],
            [Dd::ZERO, Dd::ZERO, -Dd::ONE],
        ]);
        let h0 = &self.copies[0];
        let mut h0t = h0.0;
        for (r, row) in h0t.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = h0.0[c][r];
            }
        }
        let inv = j.mul(&DdMat3(h0t)).mul(&j);
        let m = inv.mul(&self.copies[i]).to_f64();
        HIsometry::from_matrix(nalgebra::Matrix3::from_fn(|r, c| m[r][c]))
    }

    /// Frame coordinates of a line given in the coordinates of `P`
    /// (equivalently of copy 0 before unfolding).
    pub fn line_from_copy0(&self, g: &HGeodesic) -> DdVec3 {
        let n = g.normal();
        self.copies[0].apply(&DdVec3::from_f64([n.x, n.y, n.z]))
    }

    fn constraints(&self) -> (Vec<DdVec3>, Vec<(usize, i8)>) {
        let mut pts: Vec<DdVec3> = Vec::new();
        let mut cons = Vec::new();
        let index_of = |p: &DdVec3, pts: &mut Vec<DdVec3>| -> usize {
            for (i, q) in pts.iter().enumerate() {
                let d = p.sub(q);
                // Q(d,d) = 2 cosh(dist) - 2 for points on the hyperboloid.
                if d.q(&d).to_f64().abs() < 1e-24 {
                    return i;
                }
            }
            pts.push(*p);
            pts.len() - 1
        };
        for g in &self.gates {
            let l = index_of(&g.left, &mut pts);
            cons.push((l, 1));
            let r = index_of(&g.right, &mut pts);
            cons.push((r, -1));
        }
        (pts, cons)
    }

    /// Smallest signed clearance `s·Q(n, c)` over all constraints
    /// (sinh of the hyperbolic clearance), stopping early below `floor`.
    fn min_slack(n: &DdVec3, pts: &[DdVec3], cons: &[(usize, i8)], floor: f64) -> f64 {
        let mut worst = f64::INFINITY;
        for &(i, s) in cons {
            let v = n.q(&pts[i]).to_f64() * s as f64;
            if v < worst {
                worst = v;
                if worst < floor {
                    return worst;
                }
            }
        }
        worst
    }

    /// Crossing parameters of the line `n` with each gate, or `None` if the
    /// line misses a gate.
    fn crossing_params(&self, n: &DdVec3) -> Option<Vec<f64>> {
        let e3 = DdVec3([Dd::ZERO, Dd::ZERO, Dd::ONE]);
        let o = e3.add(&n.scale(n.0[2])).normalized_timelike()?;
        let u = n.j_cross(&o).normalized_spacelike()?;
        self.gates
            .iter()
            .map(|g| {
                let ql = n.q(&g.left);
                let qr = n.q(&g.right);
                let x = g.right.scale(ql).sub(&g.left.scale(qr)).normalized_timelike()?;
                Some(x.q(&u).to_f64().asinh())
            })
            .collect()
    }

    fn ordered(params: &[f64]) -> bool {
        params.windows(2).all(|w| w[0] < w[1])
    }

    fn witness(&self, n: &DdVec3, margin: f64, params: Vec<f64>) -> TransversalWitness {
        let g = HGeodesic::from_normal(&nalgebra::Vector3::from(n.to_f64()))
            .expect("feasible normals are spacelike");
        TransversalWitness {
            frame_copy: self.frame_copy,
            normal: n.0.map(|d| [d.hi, d.lo]),
            chord: crate::hyperbolic::to_klein_line(&g),
            crossing_params: params,
            margin,
        }
    }

    /// Decide realizability, also trying the given candidate lines (frame
    /// coordinates, e.g. from [`Corridor::line_from_copy0`]).
    pub fn realizable_with(&self, hints: &[DdVec3]) -> Result<Realizability, UnfoldError> {
        if self.reach > MAX_REACH {
            return Err(UnfoldError::PrecisionExceeded { reach: self.reach });
        }
        if self.gates.is_empty() {
            // Any chord through the interior realizes the empty word.
            let c = DdVec3::from_f64([0.0, 1.0, 0.0]);
            let rot = self.copies[0].apply(&c);
            let n = rot.normalized_spacelike().expect("spacelike");
            let mut w = self.witness(&n, f64::INFINITY, Vec::new());
            w.margin = f64::INFINITY;
            return Ok(Realizability::Yes { witness: w });
        }
        let (pts, cons) = self.constraints();
        // Early exit: the same point required on both sides.
        for &(i, s) in &cons {
            if cons.iter().any(|&(j, t)| j == i && t != s) {
                return Ok(Realizability::No { reason: NoReason::NoTransversal });
            }
        }
        let mut rays: Vec<DdVec3> = Vec::new();
        let consider = |n: DdVec3, rays: &mut Vec<DdVec3>| {
            for cand in [n, n.neg()] {
                if Self::min_slack(&cand, &pts, &cons, -CLOSED_TOL) >= -CLOSED_TOL {
                    rays.push(cand);
                }
            }
        };
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if let Some(n) = pts[i].j_cross(&pts[j]).normalized_spacelike() {
                    consider(n, &mut rays);
                }
            }
        }
        // With a single gate the cone has no extreme rays; the gate's
        // perpendicular bisector always crosses it.
        for g in &self.gates {
            if let Some(n) = g.left.sub(&g.right).normalized_spacelike() {
                consider(n, &mut rays);
            }
        }
        for h in hints {
            if let Some(n) = h.normalized_spacelike() {
                consider(n, &mut rays);
            }
        }
        if rays.is_empty() {
            return Ok(Realizability::No { reason: NoReason::NoTransversal });
        }
        let mut sum = DdVec3::default();
        for r in &rays {
            sum = sum.add(r);
        }
        let mut candidates: Vec<DdVec3> = sum.normalized_spacelike().into_iter().collect();
        // Fallbacks for thin or non-convex feasible sets: rays pulled toward
        // the mean, and the rays themselves.
        if let Some(mean) = candidates.first().copied() {
            candidates.extend(rays.iter().filter_map(|r| r.add(&mean).normalized_spacelike()));
        }
        candidates.extend(rays.iter().copied());
        let mut best_margin = f64::NEG_INFINITY;
        let mut any_ordered = false;
        let mut best: Option<(DdVec3, f64, Vec<f64>)> = None;
        for n in candidates {
            let slack = Self::min_slack(&n, &pts, &cons, f64::NEG_INFINITY);
            let Some(params) = self.crossing_params(&n) else { continue };
            if !Self::ordered(&params) {
                continue;
            }
            any_ordered = true;
            let margin = slack.max(0.0).asinh();
            if slack > best_margin {
                best_margin = slack;
                best = Some((n, margin, params));
            }
            if margin >= 1e-3 {
                break;
            }
        }
        match best {
            Some((n, margin, params)) if margin >= EPS_GATE => {
                Ok(Realizability::Yes { witness: self.witness(&n, margin, params) })
            }
            // Clearance indistinguishable from zero: the only limiting lines
            // run through a vertex, which no trajectory may do.
            Some((_, _, _)) if best_margin <= CLOSED_TOL => Ok(Realizability::No { reason: NoReason::NoTransversal }),
            Some((_, margin, _)) => Ok(Realizability::Grazing { margin }),
            None if !any_ordered => Ok(Realizability::No { reason: NoReason::OrderViolation }),
            None => Ok(Realizability::No { reason: NoReason::NoTransversal }),
        }
    }

    pub fn realizable(&self) -> Result<Realizability, UnfoldError> {
        self.realizable_with(&[])
    }

    /// Vertex-to-vertex chord crossing every gate strictly and in order.
    pub fn generalized_diagonal(&self) -> Result<Diagonal, UnfoldError> {
        if self.reach > MAX_REACH {
            return Err(UnfoldError::PrecisionExceeded { reach: self.reach });
        }
        if self.gates.is_empty() {
            return Ok(Diagonal::No);
        }
        let (pts, cons) = self.constraints();
        let m = self.gates.len();
        let floor = EPS_GATE.sinh();
        let mut best: Option<(f64, Diagonal)> = None;
        for (a, va) in self.poly_vertices.iter().enumerate() {
            let start = self.copies[0].apply(va);
            for (b, vb) in self.poly_vertices.iter().enumerate() {
                let end = self.copies[m].apply(vb);
                let Some(n) = start.j_cross(&end).normalized_spacelike() else { continue };
                let slack = Self::min_slack(&n, &pts, &cons, floor);
                if slack < floor {
                    continue;
                }
                let Some(params) = self.crossing_params(&n) else { continue };
                let e3 = DdVec3([Dd::ZERO, Dd::ZERO, Dd::ONE]);
                let Some(o) = e3.add(&n.scale(n.0[2])).normalized_timelike() else { continue };
                let Some(u) = n.j_cross(&o).normalized_spacelike() else { continue };
                let ts = start.q(&u).to_f64().asinh();
                let te = end.q(&u).to_f64().asinh();
                let mut all = vec![ts];
                all.extend(params);
                all.push(te);
                if !Self::ordered(&all) {
                    continue;
                }
                let margin = slack.asinh();
                if best.as_ref().is_none_or(|(m0, _)| margin > *m0) {
                    best = Some((
                        margin,
                        Diagonal::Yes {
                            from_vertex: a + 1,
                            to_vertex: b + 1,
                            frame_copy: self.frame_copy,
                            chord: KleinChord::between(&to_point(&start), &to_point(&end)),
                            margin,
                        },
                    ));
                }
            }
        }
        Ok(best.map(|(_, d)| d).unwrap_or(Diagonal::No))
    }
}

/// Realizability of `word` by a billiard trajectory in `poly`.
///
/// Words with an immediate repeat are answered `No` without unfolding.
pub fn realizable(poly: &LabeledPolygon, word: &BounceWord) -> Result<Realizability, UnfoldError> {
    realizable_with_hints(poly, word, &[])
}

/// As [`realizable`], also trying candidate lines given in the coordinates
/// of `P` (for example the line of a simulated trajectory's first segment).
pub fn realizable_with_hints(
    poly: &LabeledPolygon,
    word: &BounceWord,
    hints: &[HGeodesic],
) -> Result<Realizability, UnfoldError> {
    match unfold(poly, word) {
        Err(UnfoldError::ImmediateRepeat { .. }) => Ok(Realizability::No { reason: NoReason::ImmediateRepeat }),
        Err(e) => Err(e),
        Ok(c) => {
            let h: Vec<DdVec3> = hints.iter().map(|g| c.line_from_copy0(g)).collect();
            c.realizable_with(&h)
        }
    }
}

pub fn generalized_diagonal(poly: &LabeledPolygon, word: &BounceWord) -> Result<Diagonal, UnfoldError> {
    match unfold(poly, word) {
        Err(UnfoldError::ImmediateRepeat { .. }) => Ok(Diagonal::No),
        Err(e) => Err(e),
        Ok(c) => c.generalized_diagonal(),
    }
}

/// Re-check a witness without reusing the search: the corridor is rebuilt
/// by reflecting vertex lists in the image gate lines, and every gate
/// crossing is recomputed as the meet of two lines.
pub fn verify_witness(poly: &LabeledPolygon, word: &BounceWord, w: &TransversalWitness) -> bool {
    if word.check_alphabet(poly.n()).is_err() || word.immediate_repeat().is_some() {
        return false;
    }
    let m = word.len();
    if w.frame_copy > m {
        return false;
    }
    if m == 0 {
        return true;
    }
    let letters = word.letters();
    let n_sides = poly.n();
    let base: Vec<DdVec3> = poly.vertices().iter().map(|v| DdVec3::from_f64([v.x, v.y, v.z])).collect();
    let mut base_normals = Vec::with_capacity(n_sides);
    for k in 0..n_sides {
        match base[k].j_cross(&base[(k + 1) % n_sides]).normalized_spacelike() {
            Some(nk) => base_normals.push(nk),
            None => return false,
        }
    }
    // Side normals travel with the vertices: far from the frame, a cross
    // product of two image vertices loses every significant digit.
    let mut copies: Vec<(Vec<DdVec3>, Vec<DdVec3>)> = vec![(Vec::new(), Vec::new()); m];
    let reflect = |(verts, normals): &(Vec<DdVec3>, Vec<DdVec3>), k: usize| {
        let g = normals[k];
        let mirror = |v: &DdVec3| v.sub(&g.scale(v.q(&g).mul_f64(2.0)));
        // Reflection reverses orientation, so the reflected normals point out.
        (verts.iter().map(mirror).collect::<Vec<_>>(), normals.iter().map(|x| mirror(x).neg()).collect::<Vec<_>>())
    };
    let start = w.frame_copy.min(m - 1);
    copies[start] = (base, base_normals);
    if w.frame_copy == m {
        // Copy m itself is never a gate source; step back once to copy m - 1.
        copies[start] = reflect(&copies[start], letters[m - 1] - 1);
    }
    for i in start + 1..m {
        copies[i] = reflect(&copies[i - 1], letters[i - 1] - 1);
    }
    for i in (0..start).rev() {
        copies[i] = reflect(&copies[i + 1], letters[i] - 1);
    }
    let n = w.normal_dd();
    let Some(n) = n.normalized_spacelike() else { return false };
    let Some((origin_foot, dir)) = (|| {
        let e3 = DdVec3([Dd::ZERO, Dd::ZERO, Dd::ONE]);
        let o = e3.add(&n.scale(n.0[2])).normalized_timelike()?;
        let u = n.j_cross(&o).normalized_spacelike()?;
        Some((o, u))
    })() else {
        return false;
    };
    let _ = origin_foot;
    let mut last = f64::NEG_INFINITY;
    for i in 1..=m {
        let k = letters[i - 1] - 1;
        let (verts, normals) = &copies[i - 1];
        let (a, b) = (verts[k], verts[(k + 1) % n_sides]);
        let (qa, qb) = (n.q(&a).to_f64(), n.q(&b).to_f64());
        if !(qa * qb < 0.0) || qa.abs().min(qb.abs()) < EPS_GATE.sinh() {
            return false;
        }
        let g = normals[k];
        let Some(x) = n.j_cross(&g).normalized_timelike() else { return false };
        let t = x.q(&dir).to_f64().asinh();
        if !(t > last) {
            return false;
        }
        last = t;
    }
    true
}

/// All words of length `1..=max_len` that carry a generalized diagonal.
///
/// Depth-first over words without immediate repeats, pruning prefixes that
/// are not realizable (every diagonal line also realizes its prefixes).
/// Branches are explored in parallel; the result is a sorted set.
pub fn enumerate_diagonals(poly: &LabeledPolygon, max_len: usize) -> Result<BTreeSet<BounceWord>, UnfoldError> {
    if max_len > MAX_DIAGONAL_LEN {
        return Err(UnfoldError::BudgetExceeded { requested: max_len, limit: MAX_DIAGONAL_LEN });
    }
    if max_len == 0 {
        return Ok(BTreeSet::new());
    }
    let n = poly.n();
    let parts: Vec<Result<BTreeSet<BounceWord>, UnfoldError>> = (1..=n)
        .into_par_iter()
        .map(|first| {
            let mut out = BTreeSet::new();
            let mut stack = vec![vec![first]];
            while let Some(letters) = stack.pop() {
                let word = BounceWord(letters);
                let c = unfold(poly, &word)?;
                if c.realizable()?.is_no() {
                    continue;
                }
                if c.generalized_diagonal()?.is_yes() {
                    out.insert(word.clone());
                }
                if word.len() < max_len {
                    let lastl = *word.letters().last().expect("non-empty");
                    for next in (1..=n).rev().filter(|l| *l != lastl) {
                        let mut w = word.letters().to_vec();
                        w.push(next);
                        stack.push(w);
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = BTreeSet::new();
    for p in parts {
        all.extend(p?);
    }
    Ok(all)
}
