//! Fractional coloring: partial Δ-colorings that leave marked nodes out, the
//! `(qΔ : q-1)` pipeline, the `(qΔ+1 : q)` small-support variant, the fast
//! randomized variants, and the amplification / seed-enumeration combinators.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::clustering::{self, ClusterClass, ClusterError, ClusteringParams, RulingClustering};
use crate::coloring::{Color, ListAssignment, MultiColoring, Outcome, PartialColoring, ProperColoring, RoundLedger};
use crate::graph::Graph;
use crate::primitives::{self, PrimitiveError};
use crate::sim::derive_seed;

/// Trials per layer of the sloppy solver: `⌈a log2 q⌉`.
pub const SLOPPY_TRIALS_FACTOR: f64 = 4.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FracError {
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Primitive(#[from] PrimitiveError),
    #[error("layer {layer}: list instance is infeasible: {msg}")]
    ListInfeasible { layer: usize, msg: String },
    #[error("no list coloring of the degree-choosable component {component:?}")]
    ChoosableFailed { component: Vec<usize> },
    #[error("path node {node}: {len} available colors, {need} required")]
    PathList { node: usize, len: usize, need: usize },
    #[error("path completion failed")]
    PathUnsolvable,
    #[error("component around node {center} admits no small-support coloring")]
    ComponentUncolorable { center: usize },
    #[error("layer {layer} exceeds the radius bound {bound}")]
    RadiusBound { layer: usize, bound: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

/// Strategy for the `(degree+1)`-list instances of the peeling layers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ListSolver {
    /// Deterministic sweep over the helper coloring; `T` = helper palette.
    Sweep,
    /// `⌈factor · log2 q⌉` random trials; may leave nodes uncolored.
    Sloppy { factor: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkRule {
    /// The `q` members with the smallest identifiers.
    Smallest,
    /// Uniformly random distinct members.
    Random,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub list_solver: ListSolver,
    pub marks: MarkRule,
    pub c_alpha: Option<usize>,
    pub alpha: Option<usize>,
    /// Distance-`alpha` coloring replacing both identifier-based colorings.
    pub precoloring: Option<ProperColoring>,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            list_solver: ListSolver::Sweep,
            marks: MarkRule::Smallest,
            c_alpha: None,
            alpha: None,
            precoloring: None,
            seed: 0,
        }
    }
}

/// Where the peeling of one cluster starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    /// Left uncolored (marks, small-support paths).
    Leave(Vec<usize>),
    /// Low-degree node colored last.
    Witness(usize),
    /// Degree-choosable set colored last by exhaustive search.
    Component(Vec<usize>),
}

impl Source {
    fn nodes(&self) -> Vec<usize> {
        match self {
            Source::Leave(v) | Source::Component(v) => v.clone(),
            Source::Witness(w) => vec![*w],
        }
    }
}

/// Clustering and helper coloring shared by all parallel runs.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub clustering: RulingClustering,
    pub helper: ProperColoring,
    pub ledger: RoundLedger,
}

impl Prepared {
    /// Bound on the distance from a cluster's source set to any member.
    pub fn radius_bound(&self) -> usize {
        2 * self.clustering.beta
    }
}

pub fn prepare(g: &Graph, q: usize, cfg: &PipelineConfig) -> Result<Prepared, FracError> {
    let params = ClusteringParams {
        q,
        c_alpha: cfg.c_alpha,
        alpha: cfg.alpha,
        precoloring: cfg.precoloring.clone(),
        choosable_cap: None,
    };
    let cl = clustering::ruling_set_clustering(g, &params)?;
    let helper = match &cfg.precoloring {
        Some(pre) => primitives::linial_from(g, pre)?,
        None => primitives::linial_coloring(g)?,
    };
    let mut ledger = cl.ledger.clone();
    ledger.record("helper-coloring", helper.rounds);
    Ok(Prepared { clustering: cl.value, helper: helper.value, ledger })
}

/// Any proper coloring of `g` from the lists, by backtracking.
pub fn backtrack_list_coloring(g: &Graph, lists: &ListAssignment) -> Option<Vec<Color>> {
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (lists[v].len(), std::cmp::Reverse(g.degree(v))));
    let mut colors: Vec<Option<Color>> = vec![None; n];
    fn go(g: &Graph, lists: &ListAssignment, order: &[usize], i: usize, colors: &mut Vec<Option<Color>>) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        for &c in &lists[v] {
            if g.neighbors(v).iter().all(|&w| colors[w] != Some(c)) {
                colors[v] = Some(c);
                if go(g, lists, order, i + 1, colors) {
                    return true;
                }
                colors[v] = None;
            }
        }
        false
    }
    go(g, lists, &order, 0, &mut colors).then(|| colors.into_iter().map(|c| c.unwrap_or(0)).collect())
}

fn free_colors(g: &Graph, v: usize, palette: Color, colors: &[Option<Color>]) -> Vec<Color> {
    let taken: HashSet<Color> = g.neighbors(v).iter().filter_map(|&w| colors[w]).collect();
    (1..=palette).filter(|c| !taken.contains(c)).collect()
}

fn per_layer_cost(solver: ListSolver, helper_palette: Color, q: usize) -> usize {
    match solver {
        ListSolver::Sweep => helper_palette as usize,
        ListSolver::Sloppy { factor } => sloppy_trials(factor, q),
    }
}

pub fn sloppy_trials(factor: f64, q: usize) -> usize {
    (factor * (q.max(1) as f64).log2()).ceil() as usize
}

/// Solve one `(degree+1)`-list instance on the nodes `layer`; colors are
/// written into `colors`.
fn solve_layer(
    g: &Graph,
    layer: &[usize],
    layer_id: usize,
    palette: Color,
    colors: &mut [Option<Color>],
    helper: &ProperColoring,
    solver: ListSolver,
    q: usize,
    seed: u64,
) -> Result<(), FracError> {
    if layer.is_empty() {
        return Ok(());
    }
    let sub = g.induced(layer);
    let lists: ListAssignment = layer.iter().map(|&v| free_colors(g, v, palette, colors)).collect();
    match solver {
        ListSolver::Sweep => {
            let out = primitives::list_color_det(&sub, &lists, &helper.restrict(layer))
                .map_err(|e| FracError::ListInfeasible { layer: layer_id, msg: e.to_string() })?;
            for (i, &v) in layer.iter().enumerate() {
                colors[v] = Some(out.value.colors[i]);
            }
        }
        ListSolver::Sloppy { factor } => {
            let trials = sloppy_trials(factor, q);
            let out = primitives::list_color_sloppy(&sub, &lists, trials, derive_seed(seed, layer_id as u64))?;
            for (i, &v) in layer.iter().enumerate() {
                colors[v] = out.value.colors[i];
            }
        }
    }
    Ok(())
}

/// Partial Δ-coloring in which, per cluster, only the nodes of a `Leave`
/// source stay uncolored (plus sloppy failures). Layers at distance `i` from
/// the sources are colored from the outermost inwards.
pub fn partial_delta_coloring_with_marks(
    g: &Graph,
    prepared: &Prepared,
    sources: &[Source],
    solver: ListSolver,
    q: usize,
    seed: u64,
) -> Result<Outcome<PartialColoring>, FracError> {
    let cl = &prepared.clustering.clustering;
    let palette = g.delta() as Color;
    let n = g.n();
    let mut layer_of = vec![usize::MAX; n];
    for (ci, cluster) in cl.clusters.iter().enumerate() {
        let start = sources[ci].nodes();
        let mut frontier = start.clone();
        for &s in &start {
            layer_of[s] = 0;
        }
        let mut d = 0;
        while !frontier.is_empty() {
            d += 1;
            let mut next = Vec::new();
            for &u in &frontier {
                for &w in g.neighbors(u) {
                    if cl.assignment[w] == Some(ci) && layer_of[w] == usize::MAX {
                        layer_of[w] = d;
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        if let Some(&v) = cluster.members.iter().find(|&&v| layer_of[v] == usize::MAX) {
            return Err(FracError::InvalidParameters(format!("cluster member {v} unreachable from its source")));
        }
    }
    let max_layer = layer_of.iter().copied().filter(|&l| l != usize::MAX).max().unwrap_or(0);
    let bound = prepared.radius_bound();
    if max_layer > bound {
        return Err(FracError::RadiusBound { layer: max_layer, bound });
    }
    let mut layers: Vec<Vec<usize>> = vec![Vec::new(); max_layer + 1];
    for v in 0..n {
        if layer_of[v] != usize::MAX {
            layers[layer_of[v]].push(v);
        }
    }
    let mut colors: Vec<Option<Color>> = vec![None; n];
    for i in (1..=max_layer).rev() {
        solve_layer(g, &layers[i], i, palette, &mut colors, &prepared.helper, solver, q, seed)?;
    }
    let witnesses: Vec<usize> =
        sources.iter().filter_map(|s| if let Source::Witness(w) = s { Some(*w) } else { None }).collect();
    solve_layer(g, &witnesses, 0, palette, &mut colors, &prepared.helper, solver, q, seed)?;
    for s in sources {
        if let Source::Component(comp) = s {
            let sub = g.induced(comp);
            let lists: ListAssignment = comp.iter().map(|&v| free_colors(g, v, palette, &colors)).collect();
            let found = backtrack_list_coloring(&sub, &lists)
                .ok_or_else(|| FracError::ChoosableFailed { component: comp.clone() })?;
            for (i, &v) in comp.iter().enumerate() {
                colors[v] = Some(found[i]);
            }
        }
    }
    let cost = per_layer_cost(solver, prepared.helper.palette, q);
    let mut ledger = RoundLedger::default();
    ledger.record("peel/layers", bound * cost);
    ledger.record("peel/witnesses", cost);
    ledger.record("peel/components", bound);
    Ok(Outcome::from_ledger(PartialColoring { palette, colors }, ledger))
}

fn marks_for(g: &Graph, members: &[usize], count: usize, rule: MarkRule, seed: u64, center_id: u64) -> Vec<usize> {
    match rule {
        MarkRule::Smallest => {
            let mut m = members.to_vec();
            m.sort_by_key(|&v| g.id(v));
            m.truncate(count);
            m
        }
        MarkRule::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, center_id));
            let mut m: Vec<usize> = rand::seq::index::sample(&mut rng, members.len(), count.min(members.len()))
                .into_iter()
                .map(|i| members[i])
                .collect();
            m.sort_unstable();
            m
        }
    }
}

/// Sources of run `j` given per-cluster marks.
fn sources_for_run(prepared: &Prepared, marks: &[Vec<usize>], j: usize) -> Vec<Source> {
    prepared
        .clustering
        .clustering
        .clusters
        .iter()
        .zip(marks)
        .map(|(c, m)| match &c.class {
            Some(ClusterClass::LowDegree { witness }) => Source::Witness(*witness),
            Some(ClusterClass::Choosable { component }) => Source::Component(component.clone()),
            _ => Source::Leave(vec![m[j]]),
        })
        .collect()
}

/// Output of [`q_delta_coloring`].
#[derive(Debug, Clone)]
pub struct QDeltaResult {
    /// Palette `qΔ`, target `q-1`.
    pub coloring: MultiColoring,
    pub runs: Vec<PartialColoring>,
    pub clustering: RulingClustering,
    /// Per cluster, the marks of the Large clusters (empty otherwise).
    pub marks: Vec<Vec<usize>>,
    /// Palette of the helper coloring, i.e. the sweep length `T`.
    pub helper_palette: Color,
}

impl QDeltaResult {
    /// How many runs left each node uncolored.
    pub fn uncolored_runs(&self) -> Vec<usize> {
        let n = self.coloring.n();
        (0..n).map(|v| self.runs.iter().filter(|r| r.colors[v].is_none()).count()).collect()
    }
}

fn run_parallel(
    g: &Graph,
    prepared: &Prepared,
    marks: &[Vec<usize>],
    runs: usize,
    solver: ListSolver,
    q: usize,
    seed: u64,
) -> Result<Vec<Outcome<PartialColoring>>, FracError> {
    (0..runs)
        .into_par_iter()
        .map(|j| {
            let sources = sources_for_run(prepared, marks, j);
            partial_delta_coloring_with_marks(g, prepared, &sources, solver, q, derive_seed(seed, j as u64))
        })
        .collect()
}

/// `(qΔ : q-1)`-coloring: `q` parallel partial Δ-colorings with disjoint
/// palettes, each leaving a different mark of every Large cluster uncolored.
pub fn q_delta_coloring(g: &Graph, q: usize, cfg: &PipelineConfig) -> Result<Outcome<QDeltaResult>, FracError> {
    if q == 0 {
        return Err(FracError::InvalidParameters("q must be >= 1".into()));
    }
    let prepared = prepare(g, q, cfg)?;
    let marks: Vec<Vec<usize>> = prepared
        .clustering
        .clustering
        .clusters
        .iter()
        .map(|c| match c.class {
            Some(ClusterClass::Large) => marks_for(g, &c.members, q, cfg.marks, cfg.seed, g.id(c.center)),
            _ => Vec::new(),
        })
        .collect();
    let outs = run_parallel(g, &prepared, &marks, q, cfg.list_solver, q, cfg.seed)?;
    let mut ledger = prepared.ledger.clone();
    ledger.absorb("parallel-runs", &outs[0].ledger);
    let runs: Vec<PartialColoring> = outs.into_iter().map(|o| o.value).collect();
    let parts: Vec<MultiColoring> = runs.iter().map(|r| MultiColoring::from_partial(r, 1)).collect();
    let coloring = MultiColoring::union_blocks(&parts, q - 1);
    let helper_palette = prepared.helper.palette;
    Ok(Outcome::from_ledger(
        QDeltaResult { coloring, runs, clustering: prepared.clustering, marks, helper_palette },
        ledger,
    ))
}

/// Single sloppy run with palette Δ and a uniformly random mark per Large
/// cluster: a partial `(Δ:1)`-coloring.
pub fn q_delta_coloring_sloppy(g: &Graph, q: usize, seed: u64) -> Result<Outcome<MultiColoring>, FracError> {
    let cfg = PipelineConfig {
        list_solver: ListSolver::Sloppy { factor: SLOPPY_TRIALS_FACTOR },
        marks: MarkRule::Random,
        seed,
        ..Default::default()
    };
    let prepared = prepare(g, q, &cfg)?;
    let marks: Vec<Vec<usize>> = prepared
        .clustering
        .clustering
        .clusters
        .iter()
        .map(|c| match c.class {
            Some(ClusterClass::Large) => marks_for(g, &c.members, 1, MarkRule::Random, seed, g.id(c.center)),
            _ => Vec::new(),
        })
        .collect();
    let out = run_parallel(g, &prepared, &marks, 1, cfg.list_solver, q, seed)?.remove(0);
    let mut ledger = prepared.ledger.clone();
    ledger.absorb("sloppy-run", &out.ledger);
    Ok(Outcome::from_ledger(MultiColoring::from_partial(&out.value, 1), ledger))
}

/// Random distance-`alpha` coloring with `q Δ^alpha` colors, then the
/// `(qΔ : q-1)` pipeline on the colored nodes, seeded by that coloring so no
/// step depends on `n`. Uncolored nodes get empty sets.
pub fn fast_no_logstar(g: &Graph, q: usize, seed: u64) -> Result<Outcome<MultiColoring>, FracError> {
    fast_no_logstar_with_palette(g, q, None, seed)
}

/// [`fast_no_logstar`] with an explicit palette for the random coloring.
pub fn fast_no_logstar_with_palette(
    g: &Graph,
    q: usize,
    palette: Option<Color>,
    seed: u64,
) -> Result<Outcome<MultiColoring>, FracError> {
    let delta = g.delta();
    let c_alpha = clustering::default_c_alpha(delta, q)
        .ok_or_else(|| FracError::InvalidParameters(format!("no separation constant for Δ={delta}, q={q}")))?;
    let alpha = clustering::alpha_for(c_alpha, delta, q);
    let c = palette.unwrap_or_else(|| {
        (delta.max(1) as Color).checked_pow(alpha as u32).and_then(|x| x.checked_mul(q as Color)).unwrap_or(Color::MAX / 2)
    });
    let pre = primitives::random_distance_coloring(g, alpha, c, derive_seed(seed, 0xfa57))?;
    let colored = pre.value.colored_nodes();
    let mut ledger = pre.ledger.clone();
    let p = q as Color * delta as Color;
    let mut out = MultiColoring::empty(g.n(), p, q.saturating_sub(1));
    if colored.is_empty() {
        return Ok(Outcome::from_ledger(out, ledger));
    }
    let sub = g.induced(&colored);
    let precoloring = ProperColoring {
        palette: c,
        colors: colored.iter().map(|&v| pre.value.colors[v].unwrap_or(1)).collect(),
    };
    let cfg = PipelineConfig { alpha: Some(alpha), precoloring: Some(precoloring), seed, ..Default::default() };
    let inner = q_delta_coloring(&sub, q, &cfg)?;
    ledger.absorb("pipeline", &inner.ledger);
    for (i, &v) in colored.iter().enumerate() {
        out.sets[v] = inner.value.coloring.sets[i].clone();
    }
    Ok(Outcome::from_ledger(out, ledger))
}

/// Disjoint `q`-subsets for consecutive path nodes, each from its list.
/// Endpoints need `q+1` colors, inner nodes `2q+1`.
pub fn path_complete(lists: &ListAssignment, q: usize) -> Result<Vec<Vec<Color>>, FracError> {
    let k = lists.len();
    for (i, l) in lists.iter().enumerate() {
        let need = if i == 0 || i + 1 == k { q + 1 } else { 2 * q + 1 };
        let mut distinct = l.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() < need {
            return Err(FracError::PathList { node: i, len: distinct.len(), need });
        }
    }
    let mut chosen: Vec<Vec<Color>> = Vec::with_capacity(k);
    let mut failed: HashSet<(usize, Vec<Color>)> = HashSet::new();
    fn subsets(avail: &[Color], q: usize, next: Option<&Vec<Color>>) -> Vec<Vec<Color>> {
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..q).collect();
        if q > avail.len() {
            return out;
        }
        loop {
            out.push(idx.iter().map(|&i| avail[i]).collect::<Vec<_>>());
            let mut i = q;
            loop {
                if i == 0 {
                    let score = |s: &Vec<Color>| next.map_or(0, |n| s.iter().filter(|c| n.contains(c)).count());
                    out.sort_by_key(score);
                    return out;
                }
                i -= 1;
                if idx[i] < avail.len() - q + i {
                    idx[i] += 1;
                    for j in i + 1..q {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    fn go(
        lists: &ListAssignment,
        q: usize,
        i: usize,
        chosen: &mut Vec<Vec<Color>>,
        failed: &mut HashSet<(usize, Vec<Color>)>,
    ) -> bool {
        if i == lists.len() {
            return true;
        }
        let prev = if i == 0 { Vec::new() } else { chosen[i - 1].clone() };
        if failed.contains(&(i, prev.clone())) {
            return false;
        }
        let mut avail: Vec<Color> = lists[i].iter().copied().filter(|c| !prev.contains(c)).collect();
        avail.sort_unstable();
        avail.dedup();
        for s in subsets(&avail, q, lists.get(i + 1)) {
            chosen.push(s);
            if go(lists, q, i + 1, chosen, failed) {
                return true;
            }
            chosen.pop();
        }
        failed.insert((i, prev));
        false
    }
    if go(lists, q, 0, &mut chosen, &mut failed) {
        Ok(chosen)
    } else {
        Err(FracError::PathUnsolvable)
    }
}

/// Output of [`small_support_coloring`].
#[derive(Debug, Clone)]
pub struct SmallSupportResult {
    /// Palette `qΔ+1`, target `q`.
    pub coloring: MultiColoring,
    pub clustering: RulingClustering,
    /// Per cluster, the induced path completed last (empty if the whole
    /// component was colored directly).
    pub paths: Vec<Vec<usize>>,
}

/// `(qΔ+1 : q)`-coloring: clusters with separation `4q+4`, a partial
/// Δ-coloring leaving one induced `(2q+1)`-node path per cluster, expansion to
/// `q` colors per node and path completion.
pub fn small_support_coloring(
    g: &Graph,
    q: usize,
    cfg: &PipelineConfig,
) -> Result<Outcome<SmallSupportResult>, FracError> {
    if q == 0 {
        return Err(FracError::InvalidParameters("q must be >= 1".into()));
    }
    let delta = g.delta();
    let cfg = PipelineConfig { alpha: Some(4 * q + 4), ..cfg.clone() };
    let prepared = prepare(g, 1, &cfg)?;
    let cl = &prepared.clustering.clustering;
    let mut paths = Vec::with_capacity(cl.clusters.len());
    let mut sources = Vec::with_capacity(cl.clusters.len());
    let mut direct: Vec<usize> = Vec::new();
    for (ci, c) in cl.clusters.iter().enumerate() {
        let path = cluster_path(g, &cl.assignment, ci, c.center, 2 * q);
        match path {
            Some(p) => {
                sources.push(Source::Leave(p.clone()));
                paths.push(p);
            }
            None => {
                // The whole component lies within the cluster.
                sources.push(Source::Leave(c.members.clone()));
                direct.push(ci);
                paths.push(Vec::new());
            }
        }
    }
    let peel = partial_delta_coloring_with_marks(g, &prepared, &sources, ListSolver::Sweep, q, cfg.seed)?;
    let mut ledger = prepared.ledger.clone();
    ledger.absorb("peel", &peel.ledger);
    let mut mc = MultiColoring::from_partial(&peel.value, 1).expand(q);
    let palette = q as Color * delta as Color + 1;
    mc.p = palette;
    for &ci in &direct {
        let c = &cl.clusters[ci];
        let sub = g.induced(&c.members);
        let lists: ListAssignment = vec![(1..=delta as Color).collect(); c.members.len()];
        let found = backtrack_list_coloring(&sub, &lists).ok_or(FracError::ComponentUncolorable { center: c.center })?;
        for (i, &v) in c.members.iter().enumerate() {
            mc.sets[v] = ((found[i] - 1) * q as Color + 1..=found[i] * q as Color).collect();
        }
    }
    for path in paths.iter().filter(|p| !p.is_empty()) {
        let lists: ListAssignment = path
            .iter()
            .map(|&v| {
                let taken: HashSet<Color> = g.neighbors(v).iter().flat_map(|&w| mc.sets[w].iter().copied()).collect();
                (1..=palette).filter(|c| !taken.contains(c)).collect()
            })
            .collect();
        let sets = path_complete(&lists, q).map_err(|e| match e {
            FracError::PathList { node, len, need } => FracError::PathList { node: path[node], len, need },
            other => other,
        })?;
        for (i, &v) in path.iter().enumerate() {
            mc.sets[v] = sets[i].clone();
        }
    }
    ledger.record("path-completion", 2 * q + 1);
    Ok(Outcome::from_ledger(SmallSupportResult { coloring: mc, clustering: prepared.clustering, paths }, ledger))
}

/// Shortest path (within the cluster) from the center to the smallest-id node
/// at distance `len`, as `len+1` nodes starting at the center.
fn cluster_path(g: &Graph, assignment: &[Option<usize>], ci: usize, center: usize, len: usize) -> Option<Vec<usize>> {
    let n = g.n();
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    dist[center] = 0;
    let mut frontier = vec![center];
    let mut d = 0;
    while !frontier.is_empty() && d < len {
        d += 1;
        let mut next = Vec::new();
        for &u in &frontier {
            for &w in g.neighbors(u) {
                if assignment[w] == Some(ci) && dist[w] == usize::MAX {
                    dist[w] = d;
                    parent[w] = u;
                    next.push(w);
                } else if dist[w] == d && g.id(u) < g.id(parent[w]) {
                    parent[w] = u;
                }
            }
        }
        frontier = next;
    }
    let end = frontier.into_iter().filter(|&v| dist[v] == len).min_by_key(|&v| g.id(v))?;
    let mut path = vec![end];
    while *path.last().unwrap() != center {
        path.push(parent[*path.last().unwrap()]);
    }
    path.reverse();
    Some(path)
}

/// A randomized algorithm producing a partial `(p:q)`-multicoloring in which
/// every node has either at least `q` colors or counts as uncolored.
pub trait PartialMulticolorer: Sync {
    fn palette(&self) -> Color;
    fn target(&self) -> usize;
    fn n(&self) -> usize;
    fn run(&self, seed: u64) -> Result<Outcome<MultiColoring>, FracError>;
    /// Keep every color of a successful node instead of exactly `target`.
    fn keep_all(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplifyParams {
    pub t: usize,
    pub epsilon: f64,
    pub f_prime: f64,
}

impl AmplifyParams {
    /// `t = ⌈(6/ε) ln(n/f')⌉`.
    pub fn new(n: usize, epsilon: f64, f_prime: f64) -> Self {
        let t = ((6.0 / epsilon) * (n.max(1) as f64 / f_prime).ln()).ceil().max(1.0) as usize;
        AmplifyParams { t, epsilon, f_prime }
    }

    pub fn with_t(t: usize, epsilon: f64) -> Self {
        AmplifyParams { t: t.max(1), epsilon, f_prime: f64::NAN }
    }
}

/// Union of several runs with disjoint palettes.
#[derive(Debug, Clone)]
pub struct AmplifyResult {
    /// Palette `t p`; each node holds `q` colors per run it succeeded in.
    pub coloring: MultiColoring,
    pub successes: Vec<usize>,
    pub runs: usize,
    /// Runs in which every node succeeded.
    pub full_successes: usize,
}

impl AmplifyResult {
    pub fn min_successes(&self) -> usize {
        self.successes.iter().copied().min().unwrap_or(0)
    }
}

fn union_runs<B: PartialMulticolorer + ?Sized>(
    base: &B,
    seeds: &[u64],
) -> Result<(AmplifyResult, usize), FracError> {
    let p = base.palette();
    let q = base.target();
    let n = base.n();
    let outs: Vec<Outcome<MultiColoring>> =
        seeds.par_iter().map(|&s| base.run(s)).collect::<Result<Vec<_>, _>>()?;
    let rounds = outs.iter().map(|o| o.rounds).max().unwrap_or(0);
    let mut sets = vec![Vec::new(); n];
    let mut successes = vec![0usize; n];
    let mut full = 0;
    for (j, out) in outs.iter().enumerate() {
        let offset = j as Color * p;
        let mut all = true;
        for v in 0..n {
            let s = &out.value.sets[v];
            if s.len() >= q && q > 0 {
                successes[v] += 1;
                let take = if base.keep_all() { s.len() } else { q };
                sets[v].extend(s.iter().take(take).map(|&c| c + offset));
            } else {
                all = false;
            }
        }
        full += all as usize;
    }
    let min = sets.iter().map(Vec::len).min().unwrap_or(0);
    let coloring = MultiColoring { p: p * seeds.len() as Color, q: min, sets };
    Ok((AmplifyResult { coloring, successes, runs: seeds.len(), full_successes: full }, rounds))
}

/// Run `base` `t` times in parallel with independent randomness and disjoint
/// palettes.
pub fn amplify<B: PartialMulticolorer + ?Sized>(
    base: &B,
    params: &AmplifyParams,
    seed: u64,
) -> Result<Outcome<AmplifyResult>, FracError> {
    let seeds: Vec<u64> = (0..params.t as u64).map(|j| derive_seed(seed, j)).collect();
    let (res, rounds) = union_runs(base, &seeds)?;
    Ok(Outcome::single(res, "amplify", rounds))
}

/// One run per pool element, the element serving as shared randomness; the
/// union is deterministic given the pool.
pub fn enumerate_seeds_derandomize<B: PartialMulticolorer + ?Sized>(
    base: &B,
    pool: &[u64],
) -> Result<Outcome<AmplifyResult>, FracError> {
    if pool.is_empty() {
        return Err(FracError::InvalidParameters("seed pool is empty".into()));
    }
    let (res, rounds) = union_runs(base, pool)?;
    Ok(Outcome::single(res, "seed-enumeration", rounds))
}

/// Synthetic base: a fixed proper coloring expanded to `q` colors, where each
/// node independently drops out with probability `fail`.
pub struct SyntheticBase {
    pub coloring: MultiColoring,
    pub fail: f64,
}

impl PartialMulticolorer for SyntheticBase {
    fn palette(&self) -> Color {
        self.coloring.p
    }
    fn target(&self) -> usize {
        self.coloring.q
    }
    fn n(&self) -> usize {
        self.coloring.n()
    }
    fn run(&self, seed: u64) -> Result<Outcome<MultiColoring>, FracError> {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mc = self.coloring.clone();
        for s in &mut mc.sets {
            if rng.random_bool(self.fail) {
                s.clear();
            }
        }
        Ok(Outcome::single(mc, "synthetic", 0))
    }
}

/// [`q_delta_coloring_sloppy`] as an amplification base.
pub struct SloppyBase<'a> {
    pub g: &'a Graph,
    pub q: usize,
}

impl PartialMulticolorer for SloppyBase<'_> {
    fn palette(&self) -> Color {
        self.g.delta() as Color
    }
    fn target(&self) -> usize {
        1
    }
    fn n(&self) -> usize {
        self.g.n()
    }
    fn run(&self, seed: u64) -> Result<Outcome<MultiColoring>, FracError> {
        q_delta_coloring_sloppy(self.g, self.q, seed)
    }
}

/// [`fast_no_logstar`] as an amplification base.
pub struct FastBase<'a> {
    pub g: &'a Graph,
    pub q: usize,
}

impl PartialMulticolorer for FastBase<'_> {
    fn palette(&self) -> Color {
        self.q as Color * self.g.delta() as Color
    }
    fn target(&self) -> usize {
        self.q - 1
    }
    fn n(&self) -> usize {
        self.g.n()
    }
    fn run(&self, seed: u64) -> Result<Outcome<MultiColoring>, FracError> {
        fast_no_logstar(self.g, self.q, seed)
    }
}
