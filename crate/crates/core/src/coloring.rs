//! Coloring containers shared by all algorithms, plus round bookkeeping.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Colors are 1-based.
pub type Color = u64;

/// Per-node color lists of a list-coloring instance.
pub type ListAssignment = Vec<Vec<Color>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("malformed coloring json: {0}")]
    Json(String),
    #[error("node index {0} out of range")]
    NodeOutOfRange(usize),
}

/// Every node colored from `1..=palette`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProperColoring {
    pub palette: Color,
    pub colors: Vec<Color>,
}

impl ProperColoring {
    /// Largest color actually used.
    pub fn used(&self) -> Color {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    pub fn restrict(&self, nodes: &[usize]) -> ProperColoring {
        ProperColoring { palette: self.palette, colors: nodes.iter().map(|&v| self.colors[v]).collect() }
    }
}

/// Some nodes colored from `1..=palette`, the rest uncolored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialColoring {
    pub palette: Color,
    pub colors: Vec<Option<Color>>,
}

impl PartialColoring {
    pub fn uncolored(n: usize, palette: Color) -> Self {
        PartialColoring { palette, colors: vec![None; n] }
    }

    pub fn uncolored_count(&self) -> usize {
        self.colors.iter().filter(|c| c.is_none()).count()
    }

    pub fn colored_nodes(&self) -> Vec<usize> {
        (0..self.colors.len()).filter(|&v| self.colors[v].is_some()).collect()
    }
}

impl From<ProperColoring> for PartialColoring {
    fn from(c: ProperColoring) -> Self {
        PartialColoring { palette: c.palette, colors: c.colors.into_iter().map(Some).collect() }
    }
}

/// A `(p:q)`-multicoloring; sets may be short or empty when partial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiColoring {
    pub p: Color,
    pub q: usize,
    /// Sorted, duplicate free.
    pub sets: Vec<Vec<Color>>,
}

impl MultiColoring {
    pub fn empty(n: usize, p: Color, q: usize) -> Self {
        MultiColoring { p, q, sets: vec![Vec::new(); n] }
    }

    pub fn n(&self) -> usize {
        self.sets.len()
    }

    /// One color per colored node.
    pub fn from_partial(c: &PartialColoring, q: usize) -> Self {
        MultiColoring {
            p: c.palette,
            q,
            sets: c.colors.iter().map(|c| c.iter().copied().collect()).collect(),
        }
    }

    /// Replace every color `c` by the block `(c-1)k+1 ..= ck`.
    pub fn expand(&self, k: usize) -> MultiColoring {
        let k64 = k as Color;
        MultiColoring {
            p: self.p * k64,
            q: self.q * k,
            sets: self
                .sets
                .iter()
                .map(|s| s.iter().flat_map(|&c| ((c - 1) * k64 + 1)..=(c * k64)).collect())
                .collect(),
        }
    }

    /// Place run `j` (0-based) of several runs with palette `p` each into its
    /// own block, and merge.
    pub fn union_blocks(runs: &[MultiColoring], q: usize) -> MultiColoring {
        let n = runs.first().map_or(0, MultiColoring::n);
        let block = runs.iter().map(|r| r.p).max().unwrap_or(0);
        let mut sets = vec![Vec::new(); n];
        for (j, run) in runs.iter().enumerate() {
            let offset = j as Color * block;
            for (v, s) in run.sets.iter().enumerate() {
                sets[v].extend(s.iter().map(|&c| c + offset));
            }
        }
        MultiColoring { p: block * runs.len() as Color, q, sets }
    }

    pub fn min_count(&self) -> usize {
        self.sets.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let colors: BTreeMap<String, &Vec<Color>> =
            self.sets.iter().enumerate().map(|(v, s)| (v.to_string(), s)).collect();
        serde_json::json!({ "p": self.p, "q": self.q, "colors": colors })
    }

    pub fn from_json(value: &serde_json::Value, n: usize) -> Result<Self, FormatError> {
        #[derive(Deserialize)]
        struct Raw {
            p: Color,
            q: usize,
            colors: BTreeMap<String, Vec<Color>>,
        }
        let raw: Raw = serde_json::from_value(value.clone()).map_err(|e| FormatError::Json(e.to_string()))?;
        let mut sets = vec![Vec::new(); n];
        for (k, mut s) in raw.colors {
            let v: usize = k.parse().map_err(|_| FormatError::Json(format!("bad node key {k:?}")))?;
            if v >= n {
                return Err(FormatError::NodeOutOfRange(v));
            }
            s.sort_unstable();
            s.dedup();
            sets[v] = s;
        }
        Ok(MultiColoring { p: raw.p, q: raw.q, sets })
    }
}

/// Rounds spent per phase of a composed algorithm.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundLedger {
    pub phases: Vec<(String, usize)>,
}

impl RoundLedger {
    pub fn record(&mut self, phase: impl Into<String>, rounds: usize) {
        self.phases.push((phase.into(), rounds));
    }

    pub fn absorb(&mut self, prefix: &str, other: &RoundLedger) {
        for (name, r) in &other.phases {
            self.phases.push((format!("{prefix}/{name}"), *r));
        }
    }

    pub fn total(&self) -> usize {
        self.phases.iter().map(|(_, r)| r).sum()
    }

    pub fn get(&self, phase: &str) -> usize {
        self.phases.iter().filter(|(n, _)| n == phase).map(|(_, r)| r).sum()
    }
}

/// A value together with the simulated rounds it took.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<T> {
    pub value: T,
    pub rounds: usize,
    pub ledger: RoundLedger,
}

impl<T> Outcome<T> {
    pub fn single(value: T, phase: &str, rounds: usize) -> Self {
        let mut ledger = RoundLedger::default();
        ledger.record(phase, rounds);
        Outcome { value, rounds, ledger }
    }

    pub fn from_ledger(value: T, ledger: RoundLedger) -> Self {
        Outcome { value, rounds: ledger.total(), ledger }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_maps_colors_to_blocks() {
        let mc = MultiColoring { p: 3, q: 1, sets: vec![vec![1], vec![3], vec![]] };
        let e = mc.expand(2);
        assert_eq!(e.p, 6);
        assert_eq!(e.q, 2);
        assert_eq!(e.sets, vec![vec![1, 2], vec![5, 6], vec![]]);
    }

    #[test]
    fn union_blocks_offsets_runs() {
        let a = MultiColoring { p: 3, q: 1, sets: vec![vec![1], vec![2]] };
        let b = MultiColoring { p: 3, q: 1, sets: vec![vec![], vec![3]] };
        let u = MultiColoring::union_blocks(&[a, b], 1);
        assert_eq!(u.p, 6);
        assert_eq!(u.sets, vec![vec![1], vec![2, 6]]);
    }

    #[test]
    fn json_roundtrip() {
        let mc = MultiColoring { p: 5, q: 2, sets: vec![vec![1, 2], vec![3, 4], vec![]] };
        let back = MultiColoring::from_json(&mc.to_json(), 3).unwrap();
        assert_eq!(back, mc);
        assert!(MultiColoring::from_json(&mc.to_json(), 2).is_err());
    }

    #[test]
    fn ledger_totals() {
        let mut l = RoundLedger::default();
        l.record("a", 3);
        l.record("b", 4);
        l.record("a", 1);
        assert_eq!(l.total(), 8);
        assert_eq!(l.get("a"), 4);
    }
}
