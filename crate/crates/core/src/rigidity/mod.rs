//! Billiard rigidity: whether the bounce spectrum pins a polygon down up to
//! label-preserving isometry.
//!
//! A polygon is flexible exactly when it is reflectively tiled by a
//! non-triangular tile. Cheap angle tests settle most inputs; the rest go to
//! a budgeted enumeration of the group generated by the side reflections and
//! the half-turns at the vertices.

pub mod compare;
pub mod grammar;
pub mod tiling;

use serde::Serialize;

use crate::polygon::{AngleSummary, LabeledPolygon};

pub use compare::{compare, compare_escalating, CompareConfig, ComparisonReport, Side};
pub use grammar::{grammar_check, GrammarError, GrammarRule, GrammarSpec, GrammarVerdict};
pub use tiling::{tiling_closure, IndiscreteWitness, LineRecord, Tile, TilingBudget, TilingResult, TilingStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RigidReason {
    IrrationalAngle,
    NoEvenSubmultiple,
    TriangleTile,
    IndiscreteGroup,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnknownReport {
    pub depth: usize,
    pub lines_found: usize,
    pub elements: usize,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RigidityVerdict {
    Rigid { reason: RigidReason },
    Flexible { tile: Tile, deformation_dim: usize },
    Unknown { report: UnknownReport },
}

impl RigidityVerdict {
    pub fn is_rigid(&self) -> bool {
        matches!(self, RigidityVerdict::Rigid { .. })
    }

    pub fn is_flexible(&self) -> bool {
        matches!(self, RigidityVerdict::Flexible { .. })
    }
}

/// The polygon as its own tile, when every angle is `pi/k`.
fn self_tile(poly: &LabeledPolygon) -> Option<Tile> {
    let ks = poly.angles().iter().map(|a| a.submultiple()).collect::<Option<Vec<u32>>>()?;
    Some(Tile { polygon: poly.clone(), submultiples: ks })
}

/// Verdict from a finished closure run.
pub fn verdict_from_tiling(result: &TilingResult) -> RigidityVerdict {
    match &result.status {
        TilingStatus::Indiscrete { .. } => RigidityVerdict::Rigid { reason: RigidReason::IndiscreteGroup },
        TilingStatus::TriangleWitness { .. } => RigidityVerdict::Rigid { reason: RigidReason::TriangleTile },
        TilingStatus::Discrete { triangle: true, .. } => RigidityVerdict::Rigid { reason: RigidReason::TriangleTile },
        TilingStatus::Discrete { tile, .. } => {
            RigidityVerdict::Flexible { tile: tile.clone(), deformation_dim: tile.n() - 3 }
        }
        TilingStatus::BudgetExhausted { depth, lines_found } => RigidityVerdict::Unknown {
            report: UnknownReport {
                depth: *depth,
                lines_found: *lines_found,
                elements: result.elements,
                note: "reflection group did not stabilize within the budget".into(),
            },
        },
    }
}

/// Decide rigidity: angle tests first, then the group closure.
pub fn classify(poly: &LabeledPolygon, budget: &TilingBudget) -> RigidityVerdict {
    let (_, summary) = poly.classify_angles();
    if summary == AngleSummary::HasIrrational {
        return RigidityVerdict::Rigid { reason: RigidReason::IrrationalAngle };
    }
    if poly.n() == 3 && self_tile(poly).is_some() {
        return RigidityVerdict::Rigid { reason: RigidReason::TriangleTile };
    }
    if poly.n() >= 4 {
        match summary {
            AngleSummary::AllEvenSubmultiple => {
                let tile = self_tile(poly).expect("even submultiples are submultiples");
                return RigidityVerdict::Flexible { tile, deformation_dim: poly.n() - 3 };
            }
            AngleSummary::NoneEvenSubmultiple => {
                return RigidityVerdict::Rigid { reason: RigidReason::NoEvenSubmultiple };
            }
            _ => {}
        }
    }
    verdict_from_tiling(&tiling_closure(poly, budget))
}
