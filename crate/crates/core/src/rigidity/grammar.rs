//! Forbidden-subword rules for billiards in good polygons.
//!
//! With the angle between sides `j` and `j+1` equal to `pi/k_j`, a bounce
//! sequence never repeats a label and never alternates `j, j+1, j, ...` for
//! more than `k_j` letters. These are necessary conditions only.

use serde::Serialize;
use thiserror::Error;

use crate::polygon::LabeledPolygon;
use crate::word::BounceWord;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GrammarError {
    #[error("angle at label {label} is not of the form pi/k")]
    NotGood { label: usize },
    #[error("angle at label {label} is {p}pi/{q}; runs are only defined for pi/k")]
    NonUnitNumerator { label: usize, p: u32, q: u32 },
    #[error("k_{label} = {k} is below 2")]
    BadOrder { label: usize, k: u32 },
}

/// `k[j-1]` is the order at the vertex between sides `j` and `j+1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrammarSpec {
    pub k: Vec<u32>,
}

impl GrammarSpec {
    pub fn new(k: Vec<u32>) -> Result<GrammarSpec, GrammarError> {
        if let Some((i, &bad)) = k.iter().enumerate().find(|(_, &x)| x < 2) {
            return Err(GrammarError::BadOrder { label: i + 1, k: bad });
        }
        Ok(GrammarSpec { k })
    }

    pub fn from_polygon(poly: &LabeledPolygon) -> Result<GrammarSpec, GrammarError> {
        let mut k = Vec::with_capacity(poly.n());
        for (i, a) in poly.angles().iter().enumerate() {
            match a.as_rational() {
                Some((1, q)) => k.push(q),
                Some((p, q)) => return Err(GrammarError::NonUnitNumerator { label: i + 1, p, q }),
                None => return Err(GrammarError::NotGood { label: i + 1 }),
            }
        }
        GrammarSpec::new(k)
    }

    pub fn n(&self) -> usize {
        self.k.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum GrammarRule {
    Repeat { label: usize },
    /// An alternating run of `j` and `j+1` longer than `k_j`.
    Run { j: usize, k: u32, length: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum GrammarVerdict {
    Admissible,
    /// `position` is the 1-based index of the letter that completes the
    /// forbidden subword.
    Forbidden { position: usize, rule: GrammarRule },
}

impl GrammarVerdict {
    pub fn is_admissible(&self) -> bool {
        matches!(self, GrammarVerdict::Admissible)
    }
}

/// The smaller label `j` of an adjacent pair `{j, j+1}` (mod n), if adjacent.
fn adjacent_pair(a: usize, b: usize, n: usize) -> Option<usize> {
    if b == a % n + 1 {
        Some(a)
    } else if a == b % n + 1 {
        Some(b)
    } else {
        None
    }
}

pub fn grammar_check(spec: &GrammarSpec, word: &BounceWord) -> GrammarVerdict {
    let n = spec.n();
    let w = word.letters();
    let mut run_pair: Option<usize> = None;
    let mut run_len = 0usize;
    for i in 0..w.len() {
        if i == 0 {
            run_len = 1;
            continue;
        }
        if w[i] == w[i - 1] {
            return GrammarVerdict::Forbidden { position: i + 1, rule: GrammarRule::Repeat { label: w[i] } };
        }
        match adjacent_pair(w[i - 1], w[i], n) {
            Some(j) if run_pair == Some(j) => run_len += 1,
            Some(j) => {
                run_pair = Some(j);
                run_len = 2;
            }
            None => {
                run_pair = None;
                run_len = 1;
            }
        }
        if let Some(j) = run_pair {
            let k = spec.k.get(j - 1).copied().unwrap_or(u32::MAX);
            if run_len > k as usize {
                return GrammarVerdict::Forbidden { position: i + 1, rule: GrammarRule::Run { j, k, length: run_len } };
            }
        }
    }
    GrammarVerdict::Admissible
}
