//! Ruling-set clustering with cluster classification, and the random-shift
//! clustering whose clusters are at least two hops apart.

use std::collections::BTreeMap;

use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{Outcome, ProperColoring, RoundLedger};
use crate::graph::Graph;
use crate::primitives::{self, PrimitiveError};
use crate::sim::{self, Action, Envelope, NodeContext, NodeProgram, NodeRng, ProgramError, SimError, Wake};

/// Default size cap for the degree-choosable witness search.
pub const CHOOSABLE_SEARCH_CAP: usize = 10;
const CHOOSABLE_SEARCH_BUDGET: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClusterError {
    #[error(transparent)]
    Primitive(#[from] PrimitiveError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("cluster centered at node {center} has no class (q={q}, Δ={delta}, alpha={alpha})")]
    Unclassified { center: usize, q: usize, delta: usize, alpha: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

/// Why a cluster can be colored without help from outside.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClusterClass {
    /// At least `q` members.
    Large,
    /// A member of degree at most Δ-1.
    LowDegree { witness: usize },
    /// A degree-choosable connected set whose neighbors all lie in the cluster.
    Choosable { component: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub center: usize,
    /// Sorted node indices.
    pub members: Vec<usize>,
    /// `None` if the induced cluster is disconnected.
    pub strong_diameter: Option<usize>,
    pub weak_diameter: usize,
    pub class: Option<ClusterClass>,
}

/// Cluster membership of every node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    /// Index into `clusters`, or `None` for unclustered nodes.
    pub assignment: Vec<Option<usize>>,
    pub clusters: Vec<Cluster>,
}

impl Clustering {
    /// Build from per-node center indices, computing exact diameters.
    pub fn from_centers(g: &Graph, centers: &[Option<usize>]) -> Clustering {
        let mut by_center: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, c) in centers.iter().enumerate() {
            if let Some(c) = c {
                by_center.entry(*c).or_default().push(v);
            }
        }
        let mut assignment = vec![None; g.n()];
        let clusters = by_center
            .into_iter()
            .enumerate()
            .map(|(i, (center, members))| {
                for &v in &members {
                    assignment[v] = Some(i);
                }
                let (strong_diameter, weak_diameter) = diameters(g, &members);
                Cluster { center, members, strong_diameter, weak_diameter, class: None }
            })
            .collect();
        Clustering { assignment, clusters }
    }

    pub fn unclustered(&self) -> usize {
        self.assignment.iter().filter(|a| a.is_none()).count()
    }

    /// `{node: center id | null}`.
    pub fn to_json(&self, g: &Graph) -> serde_json::Value {
        let map: BTreeMap<String, Option<u64>> = self
            .assignment
            .iter()
            .enumerate()
            .map(|(v, a)| (v.to_string(), a.map(|c| g.id(self.clusters[c].center))))
            .collect();
        serde_json::json!(map)
    }
}

/// Exact strong (induced) and weak (ambient) diameters of a node set.
pub fn diameters(g: &Graph, members: &[usize]) -> (Option<usize>, usize) {
    let mut inside = vec![false; g.n()];
    for &v in members {
        inside[v] = true;
    }
    let mut strong = Some(0usize);
    let mut weak = 0usize;
    for &v in members {
        let within = g.bfs_within(&[v], &inside);
        let all = g.bfs(v);
        for &u in members {
            weak = weak.max(all[u].unwrap_or(usize::MAX));
            strong = match (strong, within[u]) {
                (Some(s), Some(d)) => Some(s.max(d)),
                _ => None,
            };
        }
    }
    (strong, weak)
}

/// Gallai-tree test: a connected graph is degree-choosable iff some block is
/// neither a clique nor an odd cycle. `component` must induce a connected
/// subgraph.
pub fn is_degree_choosable(g: &Graph, component: &[usize]) -> bool {
    let h = g.induced(component);
    if h.n() == 0 || h.components().len() != 1 {
        return false;
    }
    blocks(&h).iter().any(|block| !is_clique_or_odd_cycle(&h, block))
}

fn is_clique_or_odd_cycle(h: &Graph, block: &[usize]) -> bool {
    let k = block.len();
    let mut inside = vec![false; h.n()];
    for &v in block {
        inside[v] = true;
    }
    let degs: Vec<usize> = block.iter().map(|&v| h.neighbors(v).iter().filter(|&&w| inside[w]).count()).collect();
    let edges: usize = degs.iter().sum::<usize>() / 2;
    edges == k * (k - 1) / 2 || (k % 2 == 1 && degs.iter().all(|&d| d == 2))
}

/// Biconnected blocks (as node lists) of a graph; isolated nodes form singleton blocks.
pub fn blocks(h: &Graph) -> Vec<Vec<usize>> {
    struct Tarjan<'a> {
        h: &'a Graph,
        disc: Vec<usize>,
        low: Vec<usize>,
        time: usize,
        stack: Vec<(usize, usize)>,
        out: Vec<Vec<usize>>,
    }
    impl Tarjan<'_> {
        fn visit(&mut self, u: usize, parent: Option<usize>) {
            self.time += 1;
            self.disc[u] = self.time;
            self.low[u] = self.time;
            for &w in self.h.neighbors(u) {
                if self.disc[w] == 0 {
                    self.stack.push((u, w));
                    self.visit(w, Some(u));
                    self.low[u] = self.low[u].min(self.low[w]);
                    if self.low[w] >= self.disc[u] {
                        let mut nodes = Vec::new();
                        while let Some((a, b)) = self.stack.pop() {
                            nodes.push(a);
                            nodes.push(b);
                            if (a, b) == (u, w) {
                                break;
                            }
                        }
                        nodes.sort_unstable();
                        nodes.dedup();
                        self.out.push(nodes);
                    }
                } else if Some(w) != parent && self.disc[w] < self.disc[u] {
                    self.stack.push((u, w));
                    self.low[u] = self.low[u].min(self.disc[w]);
                }
            }
        }
    }
    let mut t = Tarjan { h, disc: vec![0; h.n()], low: vec![0; h.n()], time: 0, stack: Vec::new(), out: Vec::new() };
    for v in 0..h.n() {
        if t.disc[v] == 0 {
            if h.degree(v) == 0 {
                t.out.push(vec![v]);
                t.disc[v] = usize::MAX;
            } else {
                t.visit(v, None);
            }
        }
    }
    t.out
}

/// All connected node sets of exactly `k` nodes within `allowed`, each once,
/// at most `budget` of them.
pub fn connected_subsets(g: &Graph, allowed: &[bool], k: usize, budget: usize) -> Vec<Vec<usize>> {
    fn extend(
        g: &Graph,
        allowed: &[bool],
        k: usize,
        root: usize,
        sub: &mut Vec<usize>,
        ext: Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        budget: usize,
    ) {
        if out.len() >= budget {
            return;
        }
        if sub.len() == k {
            let mut s = sub.clone();
            s.sort_unstable();
            out.push(s);
            return;
        }
        let mut ext = ext;
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &u in g.neighbors(w) {
                let exclusive = u > root
                    && allowed[u]
                    && !sub.contains(&u)
                    && u != w
                    && !next.contains(&u)
                    && sub.iter().all(|&s| !g.has_edge(s, u));
                if exclusive {
                    next.push(u);
                }
            }
            sub.push(w);
            extend(g, allowed, k, root, sub, next, out, budget);
            sub.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    for root in 0..g.n() {
        if !allowed[root] {
            continue;
        }
        let ext: Vec<usize> = g.neighbors(root).iter().copied().filter(|&u| u > root && allowed[u]).collect();
        let mut sub = vec![root];
        extend(g, allowed, k, root, &mut sub, ext, &mut out, budget);
    }
    out
}

/// `c` with `⌊alpha/2 - 3⌋ / 2 · log(Δ-1) >= log q` for `alpha = ⌈c (1 + log_Δ q)⌉`.
pub fn default_c_alpha(delta: usize, q: usize) -> Option<usize> {
    let need = (q.max(1) as f64).log2();
    let per = ((delta as f64) - 1.0).max(1.0).log2();
    (1..=256).find(|&c| {
        let alpha = alpha_for(c, delta, q) as f64;
        let half = (alpha / 2.0 - 3.0).floor();
        half / 2.0 * per >= need - 1e-12 && half >= 0.0
    })
}

pub fn alpha_for(c_alpha: usize, delta: usize, q: usize) -> usize {
    let base = (delta.max(2) as f64).ln();
    let factor = 1.0 + (q.max(1) as f64).ln() / base;
    ((c_alpha as f64 * factor) - 1e-9).ceil().max(2.0) as usize
}

/// Inputs of [`ruling_set_clustering`].
#[derive(Debug, Clone, Default)]
pub struct ClusteringParams {
    pub q: usize,
    pub c_alpha: Option<usize>,
    /// Use this separation instead of the one derived from `c_alpha`.
    pub alpha: Option<usize>,
    /// Proper coloring of `g^(alpha-1)`; replaces the identifier-based coloring.
    pub precoloring: Option<ProperColoring>,
    pub choosable_cap: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RulingClustering {
    pub clustering: Clustering,
    pub alpha: usize,
    pub levels: usize,
    /// Domination distance of the ruling set; bounds every cluster radius.
    pub beta: usize,
    pub centers: Vec<usize>,
}

impl RulingClustering {
    /// The strong-diameter bound `2 alpha^2 log Δ`.
    pub fn diameter_bound(&self, delta: usize) -> f64 {
        2.0 * (self.alpha as f64).powi(2) * (delta.max(2) as f64).log2()
    }
}

/// Levels of the ruling set used by the clustering: `⌈alpha log Δ⌉`.
pub fn ruling_levels(alpha: usize, delta: usize) -> usize {
    ((alpha as f64 * (delta.max(2) as f64).log2()) - 1e-9).ceil().max(1.0) as usize
}

/// Voronoi cells of an `(alpha, (alpha-1) alpha log Δ)`-ruling set, each
/// classified as Large, LowDegree or Choosable.
pub fn ruling_set_clustering(
    g: &Graph,
    params: &ClusteringParams,
) -> Result<Outcome<RulingClustering>, ClusterError> {
    let delta = g.delta();
    let q = params.q.max(1);
    let alpha = match (params.alpha, params.c_alpha) {
        (Some(a), _) => a.max(2),
        (None, Some(c)) => alpha_for(c, delta, q),
        (None, None) => {
            let c = default_c_alpha(delta, q).ok_or_else(|| {
                ClusterError::InvalidParameters(format!("no default separation constant for Δ={delta}, q={q}"))
            })?;
            alpha_for(c, delta, q)
        }
    };
    let levels = ruling_levels(alpha, delta);
    let beta = (alpha - 1) * levels;
    let mut ledger = RoundLedger::default();
    let ruling = primitives::ruling_set(g, alpha, beta, params.precoloring.as_ref())?;
    ledger.absorb("clustering", &ruling.ledger);
    let centers: Vec<usize> = (0..g.n()).filter(|&v| ruling.value[v]).collect();
    let assignment = voronoi(g, &centers);
    ledger.record("clustering/voronoi", beta);
    let mut clustering = Clustering::from_centers(g, &assignment.iter().map(|a| a.map(|(_, c)| c)).collect::<Vec<_>>());
    let cap = params.choosable_cap.unwrap_or(CHOOSABLE_SEARCH_CAP);
    for cluster in &mut clustering.clusters {
        cluster.class = Some(classify(g, &cluster.members, q, cap).ok_or(ClusterError::Unclassified {
            center: cluster.center,
            q,
            delta,
            alpha,
        })?);
    }
    ledger.record("clustering/gather", beta + 1);
    Ok(Outcome::from_ledger(RulingClustering { clustering, alpha, levels, beta, centers }, ledger))
}

/// Nearest center of every node, ties to the smaller center identifier.
pub fn voronoi(g: &Graph, centers: &[usize]) -> Vec<Option<(usize, usize)>> {
    let mut best: Vec<Option<(usize, usize)>> = vec![None; g.n()];
    let mut frontier: Vec<usize> = centers.to_vec();
    for &c in centers {
        best[c] = Some((0, c));
    }
    let mut dist = 0;
    while !frontier.is_empty() {
        dist += 1;
        let mut claims: BTreeMap<usize, usize> = BTreeMap::new();
        for &u in &frontier {
            let center = best[u].map(|(_, c)| c).unwrap_or(u);
            for &w in g.neighbors(u) {
                if best[w].is_none() {
                    let slot = claims.entry(w).or_insert(center);
                    if g.id(center) < g.id(*slot) {
                        *slot = center;
                    }
                }
            }
        }
        frontier = claims.keys().copied().collect();
        for (w, c) in claims {
            best[w] = Some((dist, c));
        }
    }
    best
}

/// First applicable class in the order Large, LowDegree, Choosable.
pub fn classify(g: &Graph, members: &[usize], q: usize, cap: usize) -> Option<ClusterClass> {
    if members.len() >= q {
        return Some(ClusterClass::Large);
    }
    let delta = g.delta();
    if let Some(&w) = members.iter().filter(|&&v| g.degree(v) < delta).min_by_key(|&&v| g.id(v)) {
        return Some(ClusterClass::LowDegree { witness: w });
    }
    let mut inside = vec![false; g.n()];
    for &v in members {
        inside[v] = true;
    }
    let interior: Vec<bool> = (0..g.n()).map(|v| inside[v] && g.neighbors(v).iter().all(|&w| inside[w])).collect();
    for k in 1..=cap.min(members.len()) {
        let mut sets = connected_subsets(g, &interior, k, CHOOSABLE_SEARCH_BUDGET);
        sets.sort_by_key(|s| s.iter().map(|&v| g.id(v)).collect::<Vec<_>>());
        if let Some(s) = sets.into_iter().find(|s| is_degree_choosable(g, s)) {
            return Some(ClusterClass::Choosable { component: s });
        }
    }
    None
}

/// Exponential shifts of the separated clustering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftAssignment {
    pub rate: f64,
    pub cap: f64,
    pub shifts: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparatedClustering {
    pub clustering: Clustering,
    /// Center of every node before boundary removal (`None` if truncated).
    pub before_removal: Vec<Option<usize>>,
    pub shifts: ShiftAssignment,
}

/// Shift cap and default round cap: `⌈(2 ln n + 1) / γ⌉` with `γ = ε/2`.
pub fn mpx_horizon(n: usize, epsilon: f64) -> usize {
    let gamma = epsilon / 2.0;
    ((2.0 * (n.max(2) as f64).ln() + 1.0) / gamma).ceil() as usize
}

struct MpxProgram {
    rate: f64,
    horizon: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Bid {
    value: f64,
    center: u64,
}

impl Bid {
    fn better(&self, other: &Bid) -> bool {
        self.value < other.value || (self.value == other.value && self.center < other.center)
    }
}

struct MpxState {
    shift: f64,
    best: Bid,
    done: bool,
}

impl NodeProgram for MpxProgram {
    type Input = ();
    type State = MpxState;
    type Msg = Bid;
    type Output = (u64, f64);

    fn init(&self, ctx: &NodeContext<'_, ()>) -> MpxState {
        MpxState { shift: 0.0, best: Bid { value: f64::INFINITY, center: ctx.id }, done: false }
    }

    fn step(
        &self,
        ctx: &NodeContext<'_, ()>,
        st: &mut MpxState,
        round: usize,
        inbox: &[Envelope<Bid>],
        rng: &mut NodeRng,
    ) -> Result<Action<Bid, (u64, f64)>, ProgramError> {
        let before = st.best;
        if round == 0 {
            let exp = Exp::new(self.rate).map_err(|e| ProgramError(e.to_string()))?;
            st.shift = exp.sample(rng).min(self.horizon as f64);
            st.best = Bid { value: -st.shift, center: ctx.id };
        }
        for env in inbox {
            let cand = Bid { value: env.msg.value + 1.0, center: env.msg.center };
            if cand.better(&st.best) {
                st.best = cand;
            }
        }
        let mut action = if st.best != before { Action::send(st.best) } else { Action::idle() };
        // Every center not yet heard of is more than `round` hops away.
        if !st.done && st.best.value < (round + 1) as f64 - self.horizon as f64 {
            st.done = true;
            action = action.with_output((st.best.center, st.shift));
        }
        Ok(action.wake(if st.done { Wake::OnMessage } else { Wake::NextRound }))
    }
}

/// Random-shift clustering followed by removal of the smaller-identifier
/// endpoint of every edge between clusters. A removed center keeps labeling
/// its cluster. Nodes that have not decided by
/// `round_cap` stay unclustered.
pub fn mpx_clustering_separated(
    g: &Graph,
    epsilon: f64,
    seed: u64,
    round_cap: Option<usize>,
) -> Result<Outcome<SeparatedClustering>, ClusterError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(ClusterError::InvalidParameters(format!("epsilon must lie in (0,1), got {epsilon}")));
    }
    let horizon = mpx_horizon(g.n(), epsilon);
    let cap = round_cap.unwrap_or(horizon);
    let prog = MpxProgram { rate: epsilon / 2.0, horizon };
    let run = sim::run(g, &prog, &vec![(); g.n()], seed, cap)?;
    let index = g.index_of_id();
    let before: Vec<Option<usize>> = run.outputs.iter().map(|o| o.map(|(c, _)| index[&c])).collect();
    let shifts = ShiftAssignment {
        rate: epsilon / 2.0,
        cap: horizon as f64,
        shifts: run.outputs.iter().map(|o| o.map_or(f64::NAN, |(_, s)| s)).collect(),
    };
    let mut after = before.clone();
    for (u, v) in g.edges() {
        if let (Some(a), Some(b)) = (before[u], before[v]) {
            if a != b {
                let drop = if g.id(u) < g.id(v) { u } else { v };
                after[drop] = None;
            }
        }
    }
    let mut ledger = RoundLedger::default();
    ledger.record("mpx/shifted-bfs", run.rounds);
    ledger.record("mpx/boundary", 1);
    let clustering = Clustering::from_centers(g, &after);
    Ok(Outcome::from_ledger(SeparatedClustering { clustering, before_removal: before, shifts }, ledger))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, generate_random_regular, path, random_tree};

    fn g_from(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn gallai_examples() {
        let c4 = cycle(4).unwrap();
        assert!(is_degree_choosable(&c4, &[0, 1, 2, 3]));
        let c5 = cycle(5).unwrap();
        assert!(!is_degree_choosable(&c5, &[0, 1, 2, 3, 4]));
        assert!(!is_degree_choosable(&complete(4), &[0, 1, 2, 3]));
        let bowtie = g_from(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]);
        assert!(!is_degree_choosable(&bowtie, &[0, 1, 2, 3, 4]));
        let c4_pendant = g_from(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4)]);
        assert!(is_degree_choosable(&c4_pendant, &[0, 1, 2, 3, 4]));
        assert!(!is_degree_choosable(&path(4), &[0, 1, 2, 3]));
    }

    #[test]
    fn connected_subsets_counts() {
        // Connected sets of a path P5: 5 - k + 1 of size k.
        let p = path(5);
        let all = vec![true; 5];
        for k in 1..=5 {
            assert_eq!(connected_subsets(&p, &all, k, usize::MAX).len(), 6 - k);
        }
        // K4: every subset is connected.
        let k4 = complete(4);
        assert_eq!(connected_subsets(&k4, &[true; 4], 2, usize::MAX).len(), 6);
        assert_eq!(connected_subsets(&k4, &[true; 4], 3, usize::MAX).len(), 4);
    }

    #[test]
    fn c_alpha_satisfies_inequality() {
        assert_eq!(default_c_alpha(3, 2), Some(6));
        assert_eq!(alpha_for(6, 3, 2), 10);
        assert_eq!(alpha_for(default_c_alpha(3, 8).unwrap(), 3, 8), 18);
        assert_eq!(default_c_alpha(2, 4), None);
    }

    #[test]
    fn clique_is_one_large_cluster() {
        let g = complete(4);
        let out = ruling_set_clustering(&g, &ClusteringParams { q: 2, ..Default::default() }).unwrap();
        let cl = &out.value.clustering;
        assert_eq!(cl.clusters.len(), 1);
        assert_eq!(cl.clusters[0].class, Some(ClusterClass::Large));
    }

    #[test]
    fn clusters_with_leaves_are_low_degree() {
        for seed in 0..10 {
            let g = random_tree(30, seed);
            let params = ClusteringParams { q: 100, alpha: Some(3), ..Default::default() };
            let Ok(out) = ruling_set_clustering(&g, &params) else { continue };
            for c in &out.value.clustering.clusters {
                if c.members.iter().any(|&v| g.degree(v) == 1) {
                    assert!(matches!(c.class, Some(ClusterClass::LowDegree { .. })));
                }
            }
        }
    }

    #[test]
    fn choosable_witness_in_small_regular_cluster() {
        // K4 minus a perfect matching is C4; with Δ=2 every node is full degree.
        let c4 = cycle(4).unwrap();
        let class = classify(&c4, &[0, 1, 2, 3], 10, CHOOSABLE_SEARCH_CAP);
        assert_eq!(class, Some(ClusterClass::Choosable { component: vec![0, 1, 2, 3] }));
        assert_eq!(classify(&cycle(5).unwrap(), &[0, 1, 2, 3, 4], 10, 10), None);
    }

    #[test]
    fn unclassifiable_cluster_is_an_error() {
        let c5 = cycle(5).unwrap();
        let err = ruling_set_clustering(&c5, &ClusteringParams { q: 10, alpha: Some(3), ..Default::default() });
        assert!(matches!(err, Err(ClusterError::Unclassified { q: 10, delta: 2, alpha: 3, .. })));
    }

    #[test]
    fn regular_graph_clustering_respects_bounds() {
        let g = generate_random_regular(60, 3, 5).unwrap().with_random_ids(5, 2).unwrap();
        let out = ruling_set_clustering(&g, &ClusteringParams { q: 4, ..Default::default() }).unwrap().value;
        let bound = out.diameter_bound(3);
        for c in &out.clustering.clusters {
            assert!(c.strong_diameter.unwrap() as f64 <= bound);
            assert!(c.class.is_some());
        }
        for &a in &out.centers {
            let d = g.bfs(a);
            for &b in &out.centers {
                if a != b {
                    assert!(d[b].unwrap() >= out.alpha);
                }
            }
        }
    }

    #[test]
    fn mpx_single_node_and_separation() {
        let single = Graph::from_edges(1, &[]).unwrap();
        let out = mpx_clustering_separated(&single, 0.3, 1, None).unwrap().value;
        assert_eq!(out.clustering.unclustered(), 0);
        let g = generate_random_regular(50, 3, 2).unwrap();
        for seed in 0..5 {
            let out = mpx_clustering_separated(&g, 0.9, seed, None).unwrap().value;
            for (u, v) in g.edges() {
                let (a, b) = (out.clustering.assignment[u], out.clustering.assignment[v]);
                assert!(!(a.is_some() && b.is_some() && a != b));
            }
        }
    }

    #[test]
    fn voronoi_ties_prefer_smaller_center_id() {
        let g = path(3).with_ids(vec![9, 5, 2]).unwrap();
        let cells = voronoi(&g, &[0, 2]);
        assert_eq!(cells[1], Some((1, 2)));
    }
}
