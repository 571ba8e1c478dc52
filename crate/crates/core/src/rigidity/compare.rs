//! Finite-window comparison of two polygons' bounce data.
//!
//! Words are sampled by simulating billiard orbits in one polygon and then
//! tested for realizability in the other. A `No` answer is a word of one
//! spectrum that the other polygon cannot produce. Agreement on finitely many
//! words is evidence only; it never proves the spectra equal.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::billiards::{bounce_word, simulate, SimulationError};
use crate::polygon::LabeledPolygon;
use crate::unfolding::{enumerate_diagonals, realizable, NoReason, Realizability, UnfoldError};
use crate::word::BounceWord;

/// Orbits that come this close to the boundary at the start are resampled.
const START_CLEARANCE: f64 = 1e-3;
/// Simulation attempts per requested sample before the sample is dropped.
const MAX_ATTEMPTS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CompareConfig {
    pub samples: usize,
    pub word_len: usize,
    pub seed: u64,
    /// Generalized diagonals are enumerated up to this length; 0 skips them.
    pub diagonal_len: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    P1,
    P2,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SideReport {
    /// Words simulated in this polygon and tested in the other.
    pub tested: usize,
    pub mutual: usize,
    pub one_sided: usize,
    pub grazing_discarded: usize,
    pub precision_discarded: usize,
    /// Simulations restarted because the orbit hit a vertex.
    pub vertex_restarts: usize,
    pub dropped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Distinguishing {
    /// The polygon whose orbit produced the word.
    pub sampled_from: Side,
    pub word: BounceWord,
    pub reason: NoReason,
    /// A subword that is still unrealizable in the other polygon while its
    /// two maximal proper prefix/suffix windows are not.
    pub window: BounceWord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalComparison {
    pub max_len: usize,
    pub count_p1: usize,
    pub count_p2: usize,
    pub equal: bool,
    /// Smallest word carried by exactly one of the two polygons.
    pub first_difference: Option<(BounceWord, Side)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub config: CompareConfig,
    pub from_p1: SideReport,
    pub from_p2: SideReport,
    pub one_sided_total: usize,
    pub first_distinguishing: Option<Distinguishing>,
    pub diagonals: Option<DiagonalComparison>,
    /// Set when the diagonal enumeration itself failed.
    pub diagonal_error: Option<String>,
}

enum Outcome {
    Mutual,
    OneSided(BounceWord, NoReason),
    Grazing,
    Precision,
    Dropped,
}

/// Simulate one orbit of `word_len` bounces from a seeded random start.
fn sample_word(poly: &LabeledPolygon, word_len: usize, rng: &mut ChaCha8Rng, restarts: &mut usize) -> Option<BounceWord> {
    for _ in 0..MAX_ATTEMPTS {
        let start = poly.sample_interior(rng, START_CLEARANCE);
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        match simulate(poly, start, theta, word_len) {
            Ok(t) => return Some(bounce_word(&t)),
            Err(SimulationError::VertexHit { .. }) | Err(SimulationError::Escaped { .. }) => *restarts += 1,
            Err(_) => return None,
        }
    }
    None
}

fn sample_rng(seed: u64, side: Side, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tag = match side {
        Side::P1 => 0u64,
        Side::P2 => 1u64,
    };
    rng.set_stream((tag << 40) | index as u64);
    rng
}

fn run_side(from: &LabeledPolygon, other: &LabeledPolygon, side: Side, cfg: &CompareConfig) -> (SideReport, Vec<Outcome>) {
    let results: Vec<(usize, Outcome)> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, side, i);
            let mut restarts = 0;
            let Some(word) = sample_word(from, cfg.word_len, &mut rng, &mut restarts) else {
                return (restarts, Outcome::Dropped);
            };
            let outcome = match realizable(other, &word) {
                Ok(Realizability::Yes { .. }) => Outcome::Mutual,
                Ok(Realizability::No { reason }) => Outcome::OneSided(word, reason),
                Ok(Realizability::Grazing { .. }) => Outcome::Grazing,
                Err(_) => Outcome::Precision,
            };
            (restarts, outcome)
        })
        .collect();
    let mut rep = SideReport::default();
    let mut outcomes = Vec::with_capacity(results.len());
    for (restarts, o) in results {
        rep.vertex_restarts += restarts;
        match &o {
            Outcome::Mutual => rep.mutual += 1,
            Outcome::OneSided(..) => rep.one_sided += 1,
            Outcome::Grazing => rep.grazing_discarded += 1,
            Outcome::Precision => rep.precision_discarded += 1,
            Outcome::Dropped => rep.dropped += 1,
        }
        if !matches!(o, Outcome::Dropped) {
            rep.tested += 1;
        }
        outcomes.push(o);
    }
    (rep, outcomes)
}

fn is_no(poly: &LabeledPolygon, w: &BounceWord) -> bool {
    matches!(realizable(poly, w), Ok(Realizability::No { .. }))
}

/// Shrink an unrealizable word: shortest unrealizable prefix, then the
/// shortest unrealizable suffix of that prefix. Subwords of realizable words
/// are realizable, so both searches are monotone.
pub fn shrink_unrealizable(poly: &LabeledPolygon, word: &BounceWord) -> BounceWord {
    let m = word.len();
    let (mut lo, mut hi) = (0usize, m);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if is_no(poly, &word.prefix(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let prefix = word.prefix(hi);
    let (mut lo, mut hi) = (0usize, prefix.len());
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if is_no(poly, &prefix.window(prefix.len() - mid, mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    prefix.window(prefix.len() - hi, hi)
}

fn compare_diagonals(p1: &LabeledPolygon, p2: &LabeledPolygon, max_len: usize) -> Result<DiagonalComparison, UnfoldError> {
    let (d1, d2) = rayon::join(|| enumerate_diagonals(p1, max_len), || enumerate_diagonals(p2, max_len));
    let (d1, d2) = (d1?, d2?);
    let only1 = d1.difference(&d2).next().cloned();
    let only2 = d2.difference(&d1).next().cloned();
    let first_difference = match (only1, only2) {
        (Some(a), Some(b)) if b < a => Some((b, Side::P2)),
        (Some(a), _) => Some((a, Side::P1)),
        (None, Some(b)) => Some((b, Side::P2)),
        (None, None) => None,
    };
    Ok(DiagonalComparison { max_len, count_p1: d1.len(), count_p2: d2.len(), equal: d1 == d2, first_difference })
}

/// Sample words from each polygon and test them in the other, then compare
/// generalized diagonals. Deterministic for a fixed seed.
pub fn compare(p1: &LabeledPolygon, p2: &LabeledPolygon, cfg: &CompareConfig) -> ComparisonReport {
    let (from_p1, out1) = run_side(p1, p2, Side::P1, cfg);
    let (from_p2, out2) = run_side(p2, p1, Side::P2, cfg);
    let first = out1
        .into_iter()
        .map(|o| (Side::P1, o))
        .chain(out2.into_iter().map(|o| (Side::P2, o)))
        .find_map(|(side, o)| match o {
            Outcome::OneSided(word, reason) => Some((side, word, reason)),
            _ => None,
        });
    let first_distinguishing = first.map(|(side, word, reason)| {
        let other = match side {
            Side::P1 => p2,
            Side::P2 => p1,
        };
        let window = shrink_unrealizable(other, &word);
        Distinguishing { sampled_from: side, word, reason, window }
    });
    let (diagonals, diagonal_error) = if cfg.diagonal_len == 0 {
        (None, None)
    } else {
        match compare_diagonals(p1, p2, cfg.diagonal_len) {
            Ok(d) => (Some(d), None),
            Err(e) => (None, Some(e.to_string())),
        }
    };
    ComparisonReport {
        config: *cfg,
        one_sided_total: from_p1.one_sided + from_p2.one_sided,
        from_p1,
        from_p2,
        first_distinguishing,
        diagonals,
        diagonal_error,
    }
}

/// Run [`compare`] at each word length in turn, stopping at the first report
/// that finds a one-sided word.
pub fn compare_escalating(p1: &LabeledPolygon, p2: &LabeledPolygon, cfg: &CompareConfig, lengths: &[usize]) -> Vec<ComparisonReport> {
    let mut out = Vec::new();
    for &len in lengths {
        let rep = compare(p1, p2, &CompareConfig { word_len: len, ..*cfg });
        let found = rep.one_sided_total > 0;
        out.push(rep);
        if found {
            break;
        }
    }
    out
}
