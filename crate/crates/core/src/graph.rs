//! Immutable undirected simple graphs, generators and structural queries.
//!
//! Nodes are dense indices `0..n`. Every node also carries a unique identifier
//! drawn from `{1, ..., N}` with `N = n^c`; distributed programs only ever see
//! identifiers, never indices.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on generated graph size.
pub const MAX_NODES: usize = 1 << 22;

/// Default exponent `c` of the identifier space `N = n^c`.
pub const DEFAULT_ID_EXPONENT: u32 = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("edge endpoint {0} out of range for {1} nodes")]
    NodeOutOfRange(usize, usize),
    #[error("graph would have more than {limit} nodes")]
    TooLarge { limit: usize },
    #[error("invalid grid spec: {0}")]
    InvalidGrid(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("pairing model rejected {attempts} times; retry with another seed")]
    RejectionBudgetExhausted { attempts: usize },
    #[error("infinity-norm power requested on a graph without grid coordinates")]
    NotAGrid,
    #[error("identifier space n^{exponent} overflows for n = {n}")]
    IdSpaceOverflow { n: usize, exponent: u32 },
    #[error("edge-list parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Shape of a d-dimensional grid or torus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub side_lengths: Vec<usize>,
    pub wrap: Vec<bool>,
}

impl GridSpec {
    pub fn new(side_lengths: Vec<usize>, wrap: Vec<bool>) -> Result<Self, GraphError> {
        let spec = GridSpec { side_lengths, wrap };
        spec.validate()?;
        Ok(spec)
    }

    pub fn torus(side_lengths: Vec<usize>) -> Result<Self, GraphError> {
        let wrap = vec![true; side_lengths.len()];
        Self::new(side_lengths, wrap)
    }

    pub fn dimension(&self) -> usize {
        self.side_lengths.len()
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        if self.side_lengths.is_empty() {
            return Err(GraphError::InvalidGrid("dimension must be at least 1".into()));
        }
        if self.side_lengths.len() != self.wrap.len() {
            return Err(GraphError::InvalidGrid("one wrap flag per axis required".into()));
        }
        if let Some(s) = self.side_lengths.iter().find(|&&s| s < 2) {
            return Err(GraphError::InvalidGrid(format!("side length {s} < 2")));
        }
        Ok(())
    }

    fn node_count(&self) -> Result<usize, GraphError> {
        let mut n: usize = 1;
        for &s in &self.side_lengths {
            n = n
                .checked_mul(s)
                .filter(|&n| n <= MAX_NODES)
                .ok_or(GraphError::TooLarge { limit: MAX_NODES })?;
        }
        Ok(n)
    }

    /// Row-major index of a coordinate tuple (coordinates already reduced).
    pub fn index_of(&self, coord: &[i64]) -> usize {
        let mut idx = 0usize;
        for (axis, &x) in coord.iter().enumerate() {
            idx = idx * self.side_lengths[axis] + x as usize;
        }
        idx
    }

    /// Reduce an arbitrary offset coordinate into the grid, or `None` when it
    /// falls off a non-wrapping axis.
    pub fn normalize(&self, coord: &mut [i64]) -> bool {
        for (axis, x) in coord.iter_mut().enumerate() {
            let s = self.side_lengths[axis] as i64;
            if self.wrap[axis] {
                *x = x.rem_euclid(s);
            } else if *x < 0 || *x >= s {
                return false;
            }
        }
        true
    }

    /// Signed shortest displacement from `a` to `b` along `axis`.
    pub fn displacement(&self, axis: usize, a: i64, b: i64) -> i64 {
        let s = self.side_lengths[axis] as i64;
        let raw = b - a;
        if !self.wrap[axis] {
            return raw;
        }
        let r = raw.rem_euclid(s);
        if 2 * r > s {
            r - s
        } else {
            r
        }
    }

    /// Infinity-norm distance between two coordinate tuples.
    pub fn inf_distance(&self, a: &[i64], b: &[i64]) -> u64 {
        (0..self.dimension())
            .map(|axis| self.displacement(axis, a[axis], b[axis]).unsigned_abs())
            .max()
            .unwrap_or(0)
    }
}

/// Metric used by [`Graph::power`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    Hop,
    InfinityNorm,
}

/// Role of a node in a subdivided graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeTag {
    Original(usize),
    /// Inner path node `position` (1-based, from the smaller endpoint) on base edge `edge`.
    InnerPath { edge: usize, position: usize },
}

#[derive(Debug, Clone)]
pub struct SubdivisionSpec<'a> {
    pub k: usize,
    pub base: &'a Graph,
}

/// Immutable undirected simple graph with unique node identifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    ids: Vec<u64>,
    id_space: u64,
    delta_bound: usize,
    coords: Option<Vec<Vec<i64>>>,
    grid: Option<GridSpec>,
    parent_index: Option<Vec<usize>>,
    tags: Option<Vec<NodeTag>>,
}

impl Graph {
    /// Build a graph from an edge list over nodes `0..n`. Identifiers are `1..=n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n > MAX_NODES {
            return Err(GraphError::TooLarge { limit: MAX_NODES });
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::NodeOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::NodeOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Self::from_sorted_adjacency(adj))
    }

    fn from_sorted_adjacency(adj: Vec<Vec<usize>>) -> Self {
        let n = adj.len();
        let delta = adj.iter().map(Vec::len).max().unwrap_or(0);
        Graph {
            adj,
            ids: (1..=n as u64).collect(),
            id_space: n as u64,
            delta_bound: delta,
            coords: None,
            grid: None,
            parent_index: None,
            tags: None,
        }
    }

    /// Reassign identifiers by a seeded injection into `{1, ..., n^c}`.
    pub fn with_random_ids(mut self, seed: u64, exponent: u32) -> Result<Self, GraphError> {
        let n = self.n();
        if exponent == 0 {
            return Err(GraphError::InvalidParameters("id exponent must be >= 1".into()));
        }
        let space = (n.max(1) as u64)
            .checked_pow(exponent)
            .filter(|&s| s <= (1u64 << 40))
            .ok_or(GraphError::IdSpaceOverflow { n, exponent })?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1d5_7a11);
        let picked = rand::seq::index::sample(&mut rng, space as usize, n);
        let mut ids: Vec<u64> = picked.into_iter().map(|x| x as u64 + 1).collect();
        ids.shuffle(&mut rng);
        self.ids = ids;
        self.id_space = space;
        Ok(self)
    }

    /// Replace identifiers explicitly. They must be distinct and positive.
    pub fn with_ids(mut self, ids: Vec<u64>) -> Result<Self, GraphError> {
        if ids.len() != self.n() {
            return Err(GraphError::InvalidParameters("one id per node required".into()));
        }
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        if sorted.first() == Some(&0) || sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(GraphError::InvalidParameters("ids must be distinct and >= 1".into()));
        }
        self.id_space = self.id_space.max(*sorted.last().unwrap_or(&0));
        self.ids = ids;
        Ok(self)
    }

    /// Override the maximum degree Δ announced to nodes (must dominate the real one).
    pub fn with_delta_bound(mut self, delta: usize) -> Self {
        self.delta_bound = self.delta_bound.max(delta);
        self
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    /// Actual maximum degree.
    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The maximum degree Δ known to all nodes. For induced subgraphs this is
    /// inherited from the parent graph.
    pub fn delta(&self) -> usize {
        self.delta_bound
    }

    pub fn id(&self, v: usize) -> u64 {
        self.ids[v]
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    /// Size `N` of the identifier space.
    pub fn id_space(&self) -> u64 {
        self.id_space
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Sorted edge list with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn coords(&self, v: usize) -> Option<&[i64]> {
        self.coords.as_ref().map(|c| c[v].as_slice())
    }

    pub fn grid(&self) -> Option<&GridSpec> {
        self.grid.as_ref()
    }

    /// Index of each node in the graph this one was derived from.
    pub fn parent_index(&self, v: usize) -> usize {
        self.parent_index.as_ref().map_or(v, |p| p[v])
    }

    pub fn tag(&self, v: usize) -> Option<NodeTag> {
        self.tags.as_ref().map(|t| t[v])
    }

    pub fn index_of_id(&self) -> HashMap<u64, usize> {
        self.ids.iter().enumerate().map(|(i, &id)| (id, i)).collect()
    }

    /// BFS distances from `src`; `None` for unreachable nodes.
    pub fn bfs(&self, src: usize) -> Vec<Option<usize>> {
        self.bfs_limited(src, usize::MAX)
    }

    pub fn bfs_limited(&self, src: usize, radius: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            if du == radius {
                continue;
            }
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Multi-source BFS restricted to nodes where `allowed` holds.
    pub fn bfs_within(&self, sources: &[usize], allowed: &[bool]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if allowed[s] && dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if allowed[w] && dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Nodes within distance `radius` of `v`, in BFS order.
    pub fn ball(&self, v: usize, radius: usize) -> Vec<usize> {
        let dist = self.bfs_limited(v, radius);
        let mut nodes: Vec<usize> = (0..self.n()).filter(|&u| dist[u].is_some()).collect();
        nodes.sort_by_key(|&u| (dist[u], u));
        nodes
    }

    /// Induced subgraph on `nodes` (any order; duplicates rejected). Node `i` of
    /// the result is `nodes[i]` of `self`; ids, coordinates and Δ are inherited.
    pub fn induced(&self, nodes: &[usize]) -> Graph {
        let mut position = vec![usize::MAX; self.n()];
        for (i, &v) in nodes.iter().enumerate() {
            assert!(position[v] == usize::MAX, "duplicate node {v} in induced subgraph");
            position[v] = i;
        }
        let adj = nodes
            .iter()
            .map(|&v| {
                let mut list: Vec<usize> = self.adj[v]
                    .iter()
                    .filter(|&&w| position[w] != usize::MAX)
                    .map(|&w| position[w])
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        Graph {
            adj,
            ids: nodes.iter().map(|&v| self.ids[v]).collect(),
            id_space: self.id_space,
            delta_bound: self.delta_bound,
            coords: self.coords.as_ref().map(|c| nodes.iter().map(|&v| c[v].clone()).collect()),
            grid: None,
            parent_index: Some(nodes.to_vec()),
            tags: self.tags.as_ref().map(|t| nodes.iter().map(|&v| t[v]).collect()),
        }
    }

    /// `u ~ v` iff `0 < dist(u, v) <= k` under `metric`.
    pub fn power(&self, k: usize, metric: Metric) -> Result<Graph, GraphError> {
        if k == 0 {
            return Err(GraphError::InvalidParameters("power radius must be >= 1".into()));
        }
        let adj: Vec<Vec<usize>> = match metric {
            Metric::Hop => (0..self.n())
                .map(|v| {
                    let dist = self.bfs_limited(v, k);
                    (0..self.n()).filter(|&u| u != v && dist[u].is_some()).collect()
                })
                .collect(),
            Metric::InfinityNorm => {
                let grid = self.grid.as_ref().ok_or(GraphError::NotAGrid)?;
                let coords = self.coords.as_ref().ok_or(GraphError::NotAGrid)?;
                let d = grid.dimension();
                let k = k as i64;
                let span = (2 * k + 1) as usize;
                let offsets = span.pow(d as u32);
                (0..self.n())
                    .map(|v| {
                        let mut list = Vec::new();
                        let mut c = vec![0i64; d];
                        for code in 0..offsets {
                            let mut rest = code;
                            for (axis, slot) in c.iter_mut().enumerate() {
                                *slot = coords[v][axis] + (rest % span) as i64 - k;
                                rest /= span;
                            }
                            if grid.normalize(&mut c) {
                                let u = grid.index_of(&c);
                                if u != v {
                                    list.push(u);
                                }
                            }
                        }
                        list.sort_unstable();
                        list.dedup();
                        list
                    })
                    .collect()
            }
        };
        let delta = adj.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Graph {
            adj,
            ids: self.ids.clone(),
            id_space: self.id_space,
            delta_bound: delta,
            coords: self.coords.clone(),
            grid: self.grid.clone(),
            parent_index: None,
            tags: self.tags.clone(),
        })
    }

    /// Exact girth via per-node BFS; `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let n = self.n();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[root] = 0;
            parent[root] = usize::MAX;
            queue.clear();
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[u] + 1 >= b {
                        break;
                    }
                }
                for &w in &self.adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Connected components as sorted node lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Two-coloring if the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.n()];
        for s in 0..self.n() {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let su = side[u].unwrap();
                for &w in &self.adj[u] {
                    match side[w] {
                        None => {
                            side[w] = Some(!su);
                            stack.push(w);
                        }
                        Some(sw) if sw == su => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(Option::unwrap).collect())
    }

    /// Deterministic edge-list serialization: `n m`, then sorted `u v` lines,
    /// then `# coord` lines when coordinates are present.
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.n(), edges.len());
        for (u, v) in edges {
            let _ = writeln!(out, "{u} {v}");
        }
        if let Some(coords) = &self.coords {
            for (v, c) in coords.iter().enumerate() {
                let _ = write!(out, "# coord {v}");
                for x in c {
                    let _ = write!(out, " {x}");
                }
                out.push('\n');
            }
        }
        out
    }

    /// Parse the edge-list format written by [`Graph::to_edge_list`]. Grid
    /// coordinates are restored as plain coordinates (no grid shape).
    pub fn from_edge_list(text: &str) -> Result<Graph, GraphError> {
        let err = |line: usize, msg: &str| GraphError::Parse { line, msg: msg.to_string() };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| err(hl + 1, "bad header")))
            .collect::<Result<_, _>>()?;
        if nums.len() != 2 {
            return Err(err(hl + 1, "header must be `n m`"));
        }
        let (n, m) = (nums[0], nums[1]);
        let mut edges = Vec::with_capacity(m);
        let mut coords: Vec<Option<Vec<i64>>> = vec![None; n];
        let mut any_coord = false;
        for (ln, line) in lines {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix('#') {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.first() == Some(&"coord") {
                    let v: usize =
                        toks.get(1).and_then(|t| t.parse().ok()).ok_or_else(|| err(ln + 1, "bad coord node"))?;
                    if v >= n {
                        return Err(err(ln + 1, "coord node out of range"));
                    }
                    let c = toks[2..]
                        .iter()
                        .map(|t| t.parse::<i64>().map_err(|_| err(ln + 1, "bad coordinate")))
                        .collect::<Result<Vec<_>, _>>()?;
                    coords[v] = Some(c);
                    any_coord = true;
                }
                continue;
            }
            let toks: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| err(ln + 1, "bad edge")))
                .collect::<Result<_, _>>()?;
            if toks.len() != 2 {
                return Err(err(ln + 1, "edge lines must be `u v`"));
            }
            edges.push((toks[0], toks[1]));
        }
        if edges.len() != m {
            return Err(err(hl + 1, "edge count does not match header"));
        }
        let mut g = Graph::from_edges(n, &edges)?;
        if any_coord {
            if coords.iter().any(Option::is_none) {
                return Err(err(hl + 1, "coordinates must be given for all nodes or none"));
            }
            g.coords = Some(coords.into_iter().map(Option::unwrap).collect());
        }
        Ok(g)
    }
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// d-dimensional grid or torus. Coordinates are retrievable per node.
pub fn generate_grid(spec: &GridSpec) -> Result<Graph, GraphError> {
    spec.validate()?;
    let n = spec.node_count()?;
    let d = spec.dimension();
    let mut coords = Vec::with_capacity(n);
    for idx in 0..n {
        let mut c = vec![0i64; d];
        let mut rest = idx;
        for axis in (0..d).rev() {
            c[axis] = (rest % spec.side_lengths[axis]) as i64;
            rest /= spec.side_lengths[axis];
        }
        coords.push(c);
    }
    let mut edges = Vec::new();
    for (v, c) in coords.iter().enumerate() {
        for axis in 0..d {
            let mut next = c.clone();
            next[axis] += 1;
            if spec.normalize(&mut next) {
                let u = spec.index_of(&next);
                if u != v {
                    edges.push((v.min(u), v.max(u)));
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let mut g = Graph::from_edges(n, &edges)?;
    g.coords = Some(coords);
    g.grid = Some(spec.clone());
    Ok(g)
}

pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidParameters("cycle needs n >= 3".into()));
    }
    generate_grid(&GridSpec::torus(vec![n])?)
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).expect("path edges are simple")
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges).expect("clique edges are simple")
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..a {
        for v in 0..b {
            edges.push((u, a + v));
        }
    }
    Graph::from_edges(a + b, &edges).expect("bipartite edges are simple")
}

pub fn empty(n: usize) -> Graph {
    Graph::from_edges(n, &[]).expect("no edges")
}

/// The Petersen graph (Kneser graph K(5,2)).
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    let edges: Vec<_> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
    Graph::from_edges(10, &edges).expect("petersen edges are simple")
}

/// Random Δ-regular graph from the pairing model with rejection.
pub fn generate_random_regular(n: usize, delta: usize, seed: u64) -> Result<Graph, GraphError> {
    if (n * delta) % 2 != 0 {
        return Err(GraphError::InvalidParameters(format!("n*delta = {} is odd", n * delta)));
    }
    if delta >= n {
        return Err(GraphError::InvalidParameters(format!("delta {delta} >= n {n}")));
    }
    if n > MAX_NODES {
        return Err(GraphError::TooLarge { limit: MAX_NODES });
    }
    const ATTEMPTS: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n * delta).map(|p| p / delta.max(1)).collect();
    'attempt: for _ in 0..ATTEMPTS {
        points.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n * delta / 2);
        for pair in points.chunks(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v {
                continue 'attempt;
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return Graph::from_edges(n, &edges);
    }
    Err(GraphError::RejectionBudgetExhausted { attempts: ATTEMPTS })
}

/// Uniform random labelled tree (Prüfer sequence).
pub fn random_tree(n: usize, seed: u64) -> Graph {
    if n <= 1 {
        return empty(n);
    }
    if n == 2 {
        return path(2);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prufer: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &x in &prufer {
        degree[x] += 1;
    }
    let mut leaves: std::collections::BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in &prufer {
        let leaf = *leaves.iter().next().unwrap();
        leaves.remove(&leaf);
        edges.push((leaf.min(x), leaf.max(x)));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.insert(x);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    edges.push((rest[0], rest[1]));
    Graph::from_edges(n, &edges).expect("tree edges are simple")
}

/// Random bipartite graph with sides `a`, `b` and edge probability `p`.
pub fn random_bipartite(a: usize, b: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..a {
        for v in 0..b {
            if rng.random::<f64>() < p {
                edges.push((u, a + v));
            }
        }
    }
    Graph::from_edges(a + b, &edges).expect("bipartite edges are simple")
}

/// Erdős–Rényi G(n, p).
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("gnp edges are simple")
}

/// Replace every edge by a path of length `2k + 1`. Result has `n + 2km` nodes;
/// original nodes keep their indices `0..n`.
pub fn subdivide_edges(spec: &SubdivisionSpec<'_>) -> Result<Graph, GraphError> {
    let base = spec.base;
    let k = spec.k;
    if k == 0 {
        return Err(GraphError::InvalidParameters("subdivision k must be >= 1".into()));
    }
    if base.n() == 0 {
        return Err(GraphError::InvalidParameters("base graph must be nonempty".into()));
    }
    let base_edges = base.edges();
    let total = base.n() + 2 * k * base_edges.len();
    if total > MAX_NODES {
        return Err(GraphError::TooLarge { limit: MAX_NODES });
    }
    let mut edges = Vec::with_capacity(total);
    let mut tags: Vec<NodeTag> = (0..base.n()).map(NodeTag::Original).collect();
    for (e, &(u, v)) in base_edges.iter().enumerate() {
        let mut prev = u;
        for position in 1..=2 * k {
            let w = tags.len();
            tags.push(NodeTag::InnerPath { edge: e, position });
            edges.push((prev.min(w), prev.max(w)));
            prev = w;
        }
        edges.push((prev.min(v), prev.max(v)));
    }
    let mut g = Graph::from_edges(total, &edges)?;
    g.tags = Some(tags);
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_examples() {
        let c5 = generate_grid(&GridSpec::torus(vec![5]).unwrap()).unwrap();
        assert_eq!((c5.n(), c5.m()), (5, 5));
        let g33 = generate_grid(&GridSpec::new(vec![3, 3], vec![false, false]).unwrap()).unwrap();
        assert_eq!((g33.n(), g33.m()), (9, 12));
        let t44 = generate_grid(&GridSpec::torus(vec![4, 4]).unwrap()).unwrap();
        assert_eq!((t44.n(), t44.m()), (16, 32));
        assert!((0..16).all(|v| t44.degree(v) == 4));
        assert_eq!(t44.coords(5), Some(&[1, 1][..]));
    }

    #[test]
    fn grid_rejects_bad_specs() {
        assert!(GridSpec::new(vec![], vec![]).is_err());
        assert!(GridSpec::new(vec![1, 4], vec![false, false]).is_err());
        let huge = GridSpec::new(vec![1 << 12, 1 << 12], vec![false, false]).unwrap();
        assert!(matches!(generate_grid(&huge), Err(GraphError::TooLarge { .. })));
    }

    #[test]
    fn random_regular_examples() {
        let k4 = generate_random_regular(4, 3, 7).unwrap();
        assert_eq!(k4.edges(), complete(4).edges());
        let g = generate_random_regular(10, 3, 1).unwrap();
        assert!((0..10).all(|v| g.degree(v) == 3));
        assert_eq!(generate_random_regular(10, 3, 1).unwrap(), g);
        assert!(matches!(generate_random_regular(5, 3, 1), Err(GraphError::InvalidParameters(_))));
    }

    #[test]
    fn power_examples() {
        let c5 = cycle(5).unwrap();
        assert_eq!(c5.power(2, Metric::Hop).unwrap().m(), 10);
        let p4 = path(4).power(2, Metric::Hop).unwrap();
        let degs: Vec<_> = (0..4).map(|v| p4.degree(v)).collect();
        assert_eq!(degs, vec![2, 3, 3, 2]);
        let t = generate_grid(&GridSpec::torus(vec![4, 4]).unwrap()).unwrap();
        let moore = t.power(1, Metric::InfinityNorm).unwrap();
        assert!((0..16).all(|v| moore.degree(v) == 8));
        assert_eq!(path(4).power(1, Metric::InfinityNorm), Err(GraphError::NotAGrid));
    }

    #[test]
    fn subdivision_examples() {
        let h = subdivide_edges(&SubdivisionSpec { k: 1, base: &complete(3) }).unwrap();
        assert_eq!(h.n(), 9);
        assert_eq!(h.girth(), Some(9));
        let p = subdivide_edges(&SubdivisionSpec { k: 1, base: &petersen() }).unwrap();
        assert_eq!(p.n(), 40);
        let e = subdivide_edges(&SubdivisionSpec { k: 2, base: &path(2) }).unwrap();
        assert_eq!(e.n(), 6);
        assert_eq!(e.m(), 5);
        assert_eq!(e.girth(), None);
        assert_eq!(e.tag(0), Some(NodeTag::Original(0)));
        assert_eq!(e.tag(2), Some(NodeTag::InnerPath { edge: 0, position: 1 }));
    }

    #[test]
    fn girth_examples() {
        assert_eq!(random_tree(30, 3).girth(), None);
        assert_eq!(cycle(5).unwrap().girth(), Some(5));
        assert_eq!(petersen().girth(), Some(5));
        assert_eq!(complete(4).girth(), Some(3));
        assert_eq!(complete_bipartite(3, 3).girth(), Some(4));
    }

    #[test]
    fn rejects_non_simple_input() {
        assert_eq!(Graph::from_edges(3, &[(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(Graph::from_edges(3, &[(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert_eq!(Graph::from_edges(3, &[(0, 5)]), Err(GraphError::NodeOutOfRange(5, 3)));
    }

    #[test]
    fn random_ids_are_injective_in_range() {
        let g = petersen().with_random_ids(9, 2).unwrap();
        let mut ids = g.ids().to_vec();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), 10);
        assert!(ids.iter().all(|&x| (1..=100).contains(&x)));
        assert_eq!(g.id_space(), 100);
    }

    #[test]
    fn edge_list_roundtrip_with_coords() {
        let g = generate_grid(&GridSpec::new(vec![3, 2], vec![false, true]).unwrap()).unwrap();
        let text = g.to_edge_list();
        let back = Graph::from_edge_list(&text).unwrap();
        assert_eq!(back.edges(), g.edges());
        assert_eq!(back.coords(4), g.coords(4));
        assert!(Graph::from_edge_list("2 1\n0 0\n").is_err());
        assert!(Graph::from_edge_list("3 2\n0 1\n").is_err());
    }

    #[test]
    fn random_tree_is_a_tree() {
        for seed in 0..5 {
            let t = random_tree(25, seed);
            assert_eq!(t.m(), 24);
            assert_eq!(t.components().len(), 1);
        }
    }
}
