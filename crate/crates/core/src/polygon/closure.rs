//! Polygons with prescribed angles by closing the boundary holonomy.
//!
//! Walk the boundary as a turtle: advance by `s_k` along side `k`, then turn
//! left by the exterior angle `π - α_k`. The loop closes exactly when the
//! product of these motions is the identity. The first `n-3` side lengths are
//! prescribed and Gauss-Newton solves for the last three.

use std::f64::consts::PI;

use nalgebra::{Matrix3, SMatrix, SVector, Vector3};
use thiserror::Error;

use super::{LabeledPolygon, RationalAngle};
use crate::hyperbolic::{HIsometry, HPoint};

pub const NEWTON_TOL: f64 = 1e-10;
pub const NEWTON_MAX_ITER: usize = 100;
pub const FD_STEP: f64 = 1e-6;
/// Continuation steps used when a direct solve from the seed fails.
const CONTINUATION_STEPS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClosureError {
    #[error("closure did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeformationParams {
    pub target_angles: Vec<RationalAngle>,
    /// Lengths of the sides labeled `1..=n-3`.
    pub free_lengths: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ClosureSolution {
    pub polygon: LabeledPolygon,
    /// Lengths of the sides labeled `n-2, n-1, n`.
    pub solved_lengths: [f64; 3],
    pub iterations: usize,
    pub residual: f64,
}

fn turn(alpha: f64) -> Matrix3<f64> {
    HIsometry::rotation_about_origin(PI - alpha).m
}

fn holonomy(lengths: &[f64], turns: &[Matrix3<f64>]) -> Matrix3<f64> {
    let mut m = Matrix3::identity();
    for (s, t) in lengths.iter().zip(turns) {
        m = m * HIsometry::boost_x(*s).m * t;
    }
    m
}

fn residual_vec(m: &Matrix3<f64>) -> SVector<f64, 9> {
    SVector::<f64, 9>::from_iterator((m - Matrix3::identity()).iter().copied())
}

struct Newton<'a> {
    free: &'a [f64],
    turns: &'a [Matrix3<f64>],
}

impl Newton<'_> {
    fn lengths(&self, x: &Vector3<f64>) -> Vec<f64> {
        let mut l = self.free.to_vec();
        l.extend_from_slice(x.as_slice());
        l
    }

    fn residual(&self, x: &Vector3<f64>) -> SVector<f64, 9> {
        residual_vec(&holonomy(&self.lengths(x), self.turns))
    }

    /// Returns `(solution, iterations, residual norm)`.
    fn solve(&self, mut x: Vector3<f64>) -> Result<(Vector3<f64>, usize, f64), ClosureError> {
        let mut r = self.residual(&x);
        let mut norm = r.norm();
        for it in 0..NEWTON_MAX_ITER {
            if norm < NEWTON_TOL {
                return Ok((x, it, norm));
            }
            let mut jac = SMatrix::<f64, 9, 3>::zeros();
            for c in 0..3 {
                let mut xp = x;
                let mut xm = x;
                xp[c] += FD_STEP;
                xm[c] -= FD_STEP;
                let col = (self.residual(&xp) - self.residual(&xm)) / (2.0 * FD_STEP);
                jac.set_column(c, &col);
            }
            let jtj = jac.transpose() * jac;
            let rhs = -(jac.transpose() * r);
            let step = jtj.lu().solve(&rhs).ok_or(ClosureError::NoConvergence { iterations: it, residual: norm })?;
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                let cand = x + lambda * step;
                let rc = self.residual(&cand);
                let nc = rc.norm();
                if nc.is_finite() && nc < norm {
                    x = cand;
                    r = rc;
                    norm = nc;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !accepted {
                return Err(ClosureError::NoConvergence { iterations: it, residual: norm });
            }
        }
        if norm < NEWTON_TOL {
            Ok((x, NEWTON_MAX_ITER, norm))
        } else {
            Err(ClosureError::NoConvergence { iterations: NEWTON_MAX_ITER, residual: norm })
        }
    }
}

/// Side length of the regular `n`-gon with interior angle `alpha`.
fn regular_side(n: usize, alpha: f64) -> Option<f64> {
    let c = (PI / n as f64).cos() / (alpha / 2.0).sin();
    (c > 1.0).then(|| 2.0 * c.acosh())
}

/// Solve for the polygon with the given angles and free side lengths.
///
/// The seed supplies initial values for the three solved lengths; without
/// one the regular polygon with the mean target angle is used. If Newton
/// fails from the seed, the free lengths are moved from the seed's values to
/// the targets in small continuation steps.
pub fn solve_closure(params: &DeformationParams, seed: Option<&LabeledPolygon>) -> Result<ClosureSolution, ClosureError> {
    let n = params.target_angles.len();
    if n < 3 {
        return Err(ClosureError::InfeasibleParams(format!("need at least 3 angles, got {n}")));
    }
    if params.free_lengths.len() != n - 3 {
        return Err(ClosureError::InfeasibleParams(format!(
            "expected {} free lengths, got {}",
            n - 3,
            params.free_lengths.len()
        )));
    }
    if let Some(bad) = params.free_lengths.iter().find(|l| !(**l > 0.0) || !l.is_finite()) {
        return Err(ClosureError::InfeasibleParams(format!("free length {bad} is not positive")));
    }
    let alphas: Vec<f64> = params.target_angles.iter().map(|a| a.radians()).collect();
    let sum: f64 = alphas.iter().sum();
    if !(sum < (n as f64 - 2.0) * PI) {
        return Err(ClosureError::InfeasibleParams(format!("angle sum {sum} is not hyperbolic")));
    }
    if alphas.iter().any(|a| !(*a > 0.0 && *a < PI)) {
        return Err(ClosureError::InfeasibleParams("angles must lie in (0, π)".into()));
    }
    let turns: Vec<Matrix3<f64>> = alphas.iter().map(|a| turn(*a)).collect();

    let (seed_free, seed_x) = match seed {
        Some(p) if p.n() == n => {
            let l = p.side_lengths();
            (l[..n - 3].to_vec(), Vector3::new(l[n - 3], l[n - 2], l[n - 1]))
        }
        _ => {
            let s = regular_side(n, sum / n as f64).ok_or_else(|| {
                ClosureError::InfeasibleParams("mean angle admits no regular polygon".into())
            })?;
            (vec![s; n - 3], Vector3::new(s, s, s))
        }
    };

    let direct = Newton { free: &params.free_lengths, turns: &turns }.solve(seed_x);
    let (x, iterations, residual) = match direct {
        Ok(sol) if sol.0.iter().all(|l| *l > 0.0) => sol,
        first => {
            let mut x = seed_x;
            let mut total = 0;
            let mut last = (0, 0.0);
            for step in 1..=CONTINUATION_STEPS {
                let t = step as f64 / CONTINUATION_STEPS as f64;
                let free: Vec<f64> =
                    seed_free.iter().zip(&params.free_lengths).map(|(a, b)| a + t * (b - a)).collect();
                match (Newton { free: &free, turns: &turns }).solve(x) {
                    Ok((nx, it, res)) => {
                        x = nx;
                        total += it;
                        last = (total, res);
                    }
                    Err(e) => return Err(first.err().unwrap_or(e)),
                }
            }
            (x, last.0, last.1)
        }
    };

    if let Some(bad) = x.iter().find(|l| **l <= 0.0) {
        return Err(ClosureError::InfeasibleParams(format!("solved side length {bad} is not positive")));
    }
    let mut lengths = params.free_lengths.clone();
    lengths.extend_from_slice(x.as_slice());
    let polygon = turtle_polygon(&lengths, &alphas, &params.target_angles)?;
    let report = polygon.validate();
    if !report.is_valid() {
        return Err(ClosureError::InfeasibleParams(format!("closed loop is not a valid polygon: {:?}", report.failures)));
    }
    Ok(ClosureSolution { polygon, solved_lengths: [x[0], x[1], x[2]], iterations, residual })
}

fn turtle_polygon(lengths: &[f64], alphas: &[f64], targets: &[RationalAngle]) -> Result<LabeledPolygon, ClosureError> {
    let mut m = Matrix3::identity();
    let mut vertices = Vec::with_capacity(lengths.len());
    for (s, a) in lengths.iter().zip(alphas) {
        vertices.push(HPoint::from_vector(&m.column(2).into_owned()).expect("turtle stays on the hyperboloid"));
        m = m * HIsometry::boost_x(*s).m * turn(*a);
    }
    let poly = LabeledPolygon::from_vertices(vertices).map_err(|e| ClosureError::InfeasibleParams(e.to_string()))?;
    let mut poly = poly.centered();
    poly.angles = targets.to_vec();
    Ok(poly)
}
