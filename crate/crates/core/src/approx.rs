//! Approximating the fractional chromatic number: separated random-shift
//! clustering, an exact multicoloring of every cluster, and amplification.

use std::collections::{HashMap, HashSet};

use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::clustering::{self, ClusterError};
use crate::coloring::{Color, MultiColoring, Outcome};
use crate::frac::{self, AmplifyParams, AmplifyResult, FracError, PartialMulticolorer};
use crate::graph::Graph;
use crate::oracle::{self, OracleError};

/// Largest palette handed to the cluster solver.
pub const PALETTE_CAP: usize = 12;
/// Largest non-bipartite cluster component solved exactly.
pub const CLUSTER_SIZE_CAP: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApproxError {
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Frac(#[from] FracError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("cluster component of {size} nodes exceeds the solver cap {cap}")]
    ClusterTooLarge { size: usize, cap: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

/// What the nodes know about the target ratio.
#[derive(Debug, Clone, PartialEq)]
pub enum Knowledge {
    /// A `(p:q)`-coloring is known to exist.
    KnownPQ(usize, usize),
    /// The fractional chromatic number itself.
    KnownChi(BigRational),
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxParams {
    pub epsilon: f64,
    pub knowledge: Knowledge,
    pub palette_cap: usize,
    pub size_cap: usize,
    /// Truncates the clustering; undecided nodes stay uncolored.
    pub round_cap: Option<usize>,
}

impl ApproxParams {
    pub fn new(epsilon: f64, knowledge: Knowledge) -> Result<Self, ApproxError> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(ApproxError::InvalidParameters(format!("epsilon must lie in (0,1), got {epsilon}")));
        }
        Ok(ApproxParams { epsilon, knowledge, palette_cap: PALETTE_CAP, size_cap: CLUSTER_SIZE_CAP, round_cap: None })
    }

    /// Palette used by every cluster.
    pub fn palette(&self) -> usize {
        match &self.knowledge {
            Knowledge::KnownPQ(p, _) => *p,
            Knowledge::KnownChi(chi) => {
                let num = chi.numer().to_usize().unwrap_or(self.palette_cap).max(1);
                (self.palette_cap / num).max(1) * num
            }
            Knowledge::Unknown => self.palette_cap,
        }
    }

    /// Per-node count that marks a run as successful for that node.
    pub fn threshold(&self) -> usize {
        match &self.knowledge {
            Knowledge::KnownPQ(_, q) => *q,
            Knowledge::KnownChi(chi) => {
                let num = chi.numer().to_usize().unwrap_or(1).max(1);
                let den = chi.denom().to_usize().unwrap_or(1);
                self.palette() / num * den
            }
            Knowledge::Unknown => 1,
        }
    }

    /// The asymptotic choice `p' = χ c log n / ε²`, `q' = (1-ε) p' / χ_f`
    /// with `χ = χ_f` if known and `Δ+1` otherwise. Far beyond what the
    /// exact cluster solver handles; exposed for round-structure studies.
    pub fn formula_palette(&self, n: usize, delta: usize, c: f64) -> (f64, Option<f64>) {
        let chi_f = match &self.knowledge {
            Knowledge::KnownPQ(p, q) => Some(*p as f64 / *q as f64),
            Knowledge::KnownChi(x) => Some(oracle::to_f64(x)),
            Knowledge::Unknown => None,
        };
        let chi = chi_f.unwrap_or((delta + 1) as f64);
        let p = chi * c * (n.max(2) as f64).log2() / (self.epsilon * self.epsilon);
        (p, chi_f.map(|x| (1.0 - self.epsilon) * p / x))
    }
}

/// Largest `k` such that `g` has a `(palette:k)`-coloring, with the color
/// sets (one list per node, each of size at least `k`).
pub fn best_multicoloring(g: &Graph, palette: usize, size_cap: usize) -> Result<(usize, Vec<Vec<Color>>), ApproxError> {
    let n = g.n();
    if n == 0 {
        return Ok((palette, Vec::new()));
    }
    if g.m() == 0 {
        let all: Vec<Color> = (1..=palette as Color).collect();
        return Ok((palette, vec![all; n]));
    }
    if let Some(side) = g.bipartition() {
        let half = palette / 2;
        let sets = side
            .iter()
            .map(|&s| {
                let off = if s { half } else { 0 } as Color;
                (1..=half as Color).map(|c| c + off).collect()
            })
            .collect();
        return Ok((half, sets));
    }
    if n > size_cap {
        return Err(ApproxError::ClusterTooLarge { size: n, cap: size_cap });
    }
    let sets = oracle::maximal_independent_sets(g)?;
    let max_alpha = sets.iter().map(|s| s.count_ones() as usize).max().unwrap_or(1);
    let upper = palette * max_alpha / n;
    for k in (1..=upper).rev() {
        if let Some(chosen) = cover(&sets, n, palette, k) {
            let mut out = vec![Vec::new(); n];
            for (j, s) in chosen.iter().enumerate() {
                for (v, list) in out.iter_mut().enumerate() {
                    if s >> v & 1 == 1 {
                        list.push(j as Color + 1);
                    }
                }
            }
            return Ok((k, out));
        }
    }
    Ok((0, vec![Vec::new(); n]))
}

/// `slots` independent sets covering every node at least `k` times.
fn cover(sets: &[u64], n: usize, slots: usize, k: usize) -> Option<Vec<u64>> {
    fn go(sets: &[u64], deficit: &mut Vec<usize>, slots: usize, chosen: &mut Vec<u64>, dead: &mut HashSet<(Vec<usize>, usize)>) -> bool {
        let (v, &d) = deficit.iter().enumerate().max_by_key(|&(i, d)| (*d, std::cmp::Reverse(i))).unwrap();
        if d == 0 {
            return true;
        }
        if d > slots || dead.contains(&(deficit.clone(), slots)) {
            return false;
        }
        for &s in sets.iter().filter(|&&s| s >> v & 1 == 1) {
            let before = deficit.clone();
            for (u, du) in deficit.iter_mut().enumerate() {
                if s >> u & 1 == 1 && *du > 0 {
                    *du -= 1;
                }
            }
            chosen.push(s);
            if go(sets, deficit, slots - 1, chosen, dead) {
                return true;
            }
            chosen.pop();
            *deficit = before;
        }
        dead.insert((deficit.clone(), slots));
        false
    }
    let mut deficit = vec![k; n];
    let mut chosen = Vec::new();
    let mut dead = HashSet::new();
    go(sets, &mut deficit, slots, &mut chosen, &mut dead).then_some(chosen)
}

/// Solve every connected piece of every cluster exactly with the given
/// palette. Unclustered nodes get empty sets.
pub fn cluster_optimal_coloring(
    g: &Graph,
    clustering: &clustering::Clustering,
    params: &ApproxParams,
) -> Result<MultiColoring, ApproxError> {
    let palette = params.palette();
    let mut sets = vec![Vec::new(); g.n()];
    let mut min_k = usize::MAX;
    let mut cache: HashMap<Vec<(usize, usize)>, (usize, Vec<Vec<Color>>)> = HashMap::new();
    for cluster in &clustering.clusters {
        let sub = g.induced(&cluster.members);
        for comp in sub.components() {
            let piece = sub.induced(&comp);
            let key = piece.edges();
            let key = if key.is_empty() { vec![(comp.len(), usize::MAX)] } else { key };
            let (k, local) = match cache.get(&key) {
                Some(hit) => hit.clone(),
                None => {
                    let res = best_multicoloring(&piece, palette, params.size_cap)?;
                    cache.insert(key, res.clone());
                    res
                }
            };
            min_k = min_k.min(k);
            for (i, &c) in comp.iter().enumerate() {
                sets[cluster.members[c]] = local[i].clone();
            }
        }
    }
    Ok(MultiColoring { p: palette as Color, q: if min_k == usize::MAX { 0 } else { min_k }, sets })
}

/// One clustering-plus-solve run as an amplification base.
pub struct ClusterSolveBase<'a> {
    pub g: &'a Graph,
    pub params: ApproxParams,
}

impl PartialMulticolorer for ClusterSolveBase<'_> {
    fn palette(&self) -> Color {
        self.params.palette() as Color
    }
    fn target(&self) -> usize {
        self.params.threshold()
    }
    fn n(&self) -> usize {
        self.g.n()
    }
    fn keep_all(&self) -> bool {
        true
    }
    fn run(&self, seed: u64) -> Result<Outcome<MultiColoring>, FracError> {
        let cl = clustering::mpx_clustering_separated(self.g, self.params.epsilon, seed, self.params.round_cap)?;
        let horizon = clustering::mpx_horizon(self.g.n(), self.params.epsilon);
        let mc = cluster_optimal_coloring(self.g, &cl.value.clustering, &self.params)
            .map_err(|e| FracError::InvalidParameters(e.to_string()))?;
        let mut ledger = cl.ledger;
        ledger.record("cluster-solve", horizon);
        Ok(Outcome::from_ledger(mc, ledger))
    }
}

/// Summary of an approximation run.
#[derive(Debug, Clone)]
pub struct ApproxResult {
    pub coloring: MultiColoring,
    pub runs: usize,
    /// Fraction of (node, run) pairs reaching the success threshold.
    pub success_fraction: f64,
    pub min_successes: usize,
}

impl ApproxResult {
    fn from_amplified(a: AmplifyResult) -> Self {
        let n = a.successes.len().max(1);
        let total: usize = a.successes.iter().sum();
        ApproxResult {
            min_successes: a.min_successes(),
            success_fraction: total as f64 / (n * a.runs.max(1)) as f64,
            runs: a.runs,
            coloring: a.coloring,
        }
    }

    pub fn ratio(&self) -> Option<f64> {
        (self.coloring.q > 0).then(|| self.coloring.p as f64 / self.coloring.q as f64)
    }
}

/// Randomized approximation with `t = ⌈(6/ε) ln(n²)⌉` runs.
pub fn approx_chi_f(g: &Graph, params: &ApproxParams, seed: u64) -> Result<Outcome<ApproxResult>, ApproxError> {
    let amp = AmplifyParams::new(g.n(), params.epsilon, 1.0 / g.n().max(1) as f64);
    approx_chi_f_runs(g, params, amp.t, seed)
}

/// [`approx_chi_f`] with an explicit number of runs.
pub fn approx_chi_f_runs(g: &Graph, params: &ApproxParams, t: usize, seed: u64) -> Result<Outcome<ApproxResult>, ApproxError> {
    let base = ClusterSolveBase { g, params: params.clone() };
    let out = frac::amplify(&base, &AmplifyParams::with_t(t, params.epsilon), seed)?;
    Ok(Outcome { value: ApproxResult::from_amplified(out.value), rounds: out.rounds, ledger: out.ledger })
}

/// Deterministic variant: one run per seed of the pool.
pub fn approx_chi_f_det(g: &Graph, params: &ApproxParams, pool: &[u64]) -> Result<Outcome<ApproxResult>, ApproxError> {
    let base = ClusterSolveBase { g, params: params.clone() };
    let out = frac::enumerate_seeds_derandomize(&base, pool)?;
    Ok(Outcome { value: ApproxResult::from_amplified(out.value), rounds: out.rounds, ledger: out.ledger })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path, petersen};
    use crate::oracle::check_multicoloring;

    #[test]
    fn single_edge_two_colors() {
        let (k, sets) = best_multicoloring(&path(2), 2, 10).unwrap();
        assert_eq!(k, 1);
        assert!(sets[0].iter().all(|c| !sets[1].contains(c)));
    }

    #[test]
    fn five_cycle_counts() {
        let c5 = cycle(5).unwrap();
        assert_eq!(best_multicoloring(&c5, 5, 10).unwrap().0, 2);
        assert_eq!(best_multicoloring(&c5, 10, 10).unwrap().0, 4);
        assert_eq!(best_multicoloring(&c5, 4, 10).unwrap().0, 1);
    }

    #[test]
    fn petersen_and_clique() {
        assert_eq!(best_multicoloring(&petersen(), 5, 10).unwrap().0, 2);
        assert_eq!(best_multicoloring(&complete(5), 5, 10).unwrap().0, 1);
        assert_eq!(best_multicoloring(&complete(5), 4, 10).unwrap().0, 0);
        assert!(matches!(best_multicoloring(&complete(11), 12, 10), Err(ApproxError::ClusterTooLarge { .. })));
    }

    #[test]
    fn known_palettes() {
        let chi = BigRational::new(5.into(), 2.into());
        let p = ApproxParams::new(0.2, Knowledge::KnownChi(chi)).unwrap();
        assert_eq!(p.palette(), 10);
        assert_eq!(p.threshold(), 4);
        assert_eq!(ApproxParams::new(0.2, Knowledge::KnownPQ(5, 1)).unwrap().palette(), 5);
        assert!(ApproxParams::new(1.0, Knowledge::Unknown).is_err());
    }

    #[test]
    fn approx_on_clique_and_cycle() {
        let k5 = complete(5);
        let params = ApproxParams::new(0.25, Knowledge::KnownPQ(5, 1)).unwrap();
        let out = approx_chi_f_runs(&k5, &params, 40, 3).unwrap().value;
        let rep = check_multicoloring(&k5, &out.coloring);
        assert!(rep.valid && rep.complete);
        assert!(out.ratio().unwrap() <= 5.0 * 2.25);

        let c5 = cycle(5).unwrap();
        let params = ApproxParams::new(0.25, Knowledge::Unknown).unwrap();
        let out = approx_chi_f_runs(&c5, &params, 40, 3).unwrap().value;
        assert!(check_multicoloring(&c5, &out.coloring).valid);
        assert!(out.ratio().unwrap() <= 2.5 * 2.25);
    }

    #[test]
    fn pool_of_one_equals_single_run() {
        let g = petersen();
        let params = ApproxParams::new(0.25, Knowledge::Unknown).unwrap();
        let base = ClusterSolveBase { g: &g, params: params.clone() };
        let single = base.run(11).unwrap().value;
        let det = approx_chi_f_det(&g, &params, &[11]).unwrap().value;
        assert_eq!(det.coloring.sets, single.sets);
    }
}
