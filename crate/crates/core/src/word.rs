//! Bounce words: finite sequences of side labels `1..=n`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("cannot parse {0:?} as a side label")]
    BadLetter(String),
    #[error("label {label} is outside 1..={n}")]
    OutOfRange { label: usize, n: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BounceWord(pub Vec<usize>);

impl BounceWord {
    pub fn new(letters: Vec<usize>) -> Self {
        BounceWord(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> BounceWord {
        BounceWord(self.0.iter().rev().copied().collect())
    }

    /// Position (1-based, of the second letter) of the first `j, j` pair.
    pub fn immediate_repeat(&self) -> Option<usize> {
        self.0.windows(2).position(|w| w[0] == w[1]).map(|i| i + 2)
    }

    pub fn check_alphabet(&self, n: usize) -> Result<(), WordError> {
        match self.0.iter().find(|l| **l == 0 || **l > n) {
            Some(&label) => Err(WordError::OutOfRange { label, n }),
            None => Ok(()),
        }
    }

    /// Apply the label map `l -> ((l - 1 + shift) mod n) + 1` letterwise.
    pub fn shifted(&self, shift: usize, n: usize) -> BounceWord {
        BounceWord(self.0.iter().map(|l| (l - 1 + shift) % n + 1).collect())
    }

    pub fn prefix(&self, len: usize) -> BounceWord {
        BounceWord(self.0[..len.min(self.len())].to_vec())
    }

    pub fn window(&self, start: usize, len: usize) -> BounceWord {
        let end = (start + len).min(self.len());
        BounceWord(self.0[start.min(end)..end].to_vec())
    }
}

impl fmt::Display for BounceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for BounceWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(BounceWord::default());
        }
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| WordError::BadLetter(t.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(BounceWord)
    }
}

impl Serialize for BounceWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
