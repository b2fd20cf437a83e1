//! Exact checkers and small-instance oracles.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clustering::{ClusterClass, Clustering};
use crate::coloring::{Color, MultiColoring, PartialColoring};
use crate::graph::{subdivide_edges, Graph, GraphError, SubdivisionSpec};

/// Node cap of [`chi_f_exact`].
pub const CHI_F_CAP: usize = 30;
/// Node cap of [`independence_number`].
pub const ALPHA_CAP: usize = 40;
/// Node cap of [`chromatic_number`].
pub const CHROMATIC_CAP: usize = 24;
const MIS_COUNT_CAP: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} needs at most {cap} nodes, graph has {n}")]
    TooLarge { what: &'static str, cap: usize, n: usize },
    #[error("more than {0} maximal independent sets")]
    TooManySets(usize),
    #[error("linear program certificate check failed: {0}")]
    Certificate(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Verdict of [`check_multicoloring`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiColoringReport {
    pub valid: bool,
    pub complete: bool,
    /// Smallest set size among colored nodes (0 if nobody is colored).
    pub q_min: usize,
    /// `p / q_min`, or `None` when `q_min` is 0.
    pub ratio: Option<f64>,
    pub colored: usize,
    /// Offending edge and shared color, or a node with an out-of-range color.
    pub witness: Option<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    SharedColor { u: usize, v: usize, color: Color },
    OutOfPalette { node: usize, color: Color },
    WrongLength { expected: usize, got: usize },
}

fn shared(a: &[Color], b: &[Color]) -> Option<Color> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return Some(a[i]),
        }
    }
    None
}

/// Exact disjointness and palette scan. Never fails; reports instead.
pub fn check_multicoloring(g: &Graph, mc: &MultiColoring) -> MultiColoringReport {
    let mut witness = None;
    if mc.sets.len() != g.n() {
        witness = Some(Violation::WrongLength { expected: g.n(), got: mc.sets.len() });
    }
    let sets: Vec<Vec<Color>> = mc
        .sets
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    if witness.is_none() {
        'outer: for (v, s) in sets.iter().enumerate() {
            for &c in s {
                if c == 0 || c > mc.p {
                    witness = Some(Violation::OutOfPalette { node: v, color: c });
                    break 'outer;
                }
            }
        }
    }
    if witness.is_none() {
        for (u, v) in g.edges() {
            if let Some(color) = shared(&sets[u], &sets[v]) {
                witness = Some(Violation::SharedColor { u, v, color });
                break;
            }
        }
    }
    let colored: Vec<usize> = sets.iter().map(Vec::len).filter(|&l| l > 0).collect();
    let q_min = colored.iter().copied().min().unwrap_or(0);
    MultiColoringReport {
        valid: witness.is_none(),
        complete: sets.len() == g.n() && sets.iter().all(|s| s.len() >= mc.q),
        q_min,
        ratio: (q_min > 0).then(|| mc.p as f64 / q_min as f64),
        colored: colored.len(),
        witness,
    }
}

/// Colored neighbors differ.
pub fn check_partial_coloring(g: &Graph, c: &PartialColoring) -> Option<(usize, usize)> {
    g.edges().into_iter().find(|&(u, v)| c.colors[u].is_some() && c.colors[u] == c.colors[v])
}

/// Maximal independent sets as bitmasks (Bron–Kerbosch with pivoting on the
/// complement graph).
pub fn maximal_independent_sets(g: &Graph) -> Result<Vec<u64>, OracleError> {
    let n = g.n();
    if n > 64 {
        return Err(OracleError::TooLarge { what: "independent set enumeration", cap: 64, n });
    }
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    // Non-neighbors (excluding self) are the complement adjacency.
    let comp: Vec<u64> = (0..n)
        .map(|v| {
            let mut m = full & !(1u64 << v);
            for &w in g.neighbors(v) {
                m &= !(1u64 << w);
            }
            m
        })
        .collect();
    let mut out = Vec::new();
    fn bk(r: u64, mut p: u64, mut x: u64, comp: &[u64], out: &mut Vec<u64>) -> Result<(), OracleError> {
        if p == 0 && x == 0 {
            out.push(r);
            if out.len() > MIS_COUNT_CAP {
                return Err(OracleError::TooManySets(MIS_COUNT_CAP));
            }
            return Ok(());
        }
        let px = p | x;
        let pivot = (0..64).filter(|&u| px >> u & 1 == 1).max_by_key(|&u| (p & comp[u]).count_ones()).unwrap_or(0);
        let mut cand = p & !comp[pivot];
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            bk(r | 1 << v, p & comp[v], x & comp[v], comp, out)?;
            p &= !(1u64 << v);
            x |= 1u64 << v;
        }
        Ok(())
    }
    if n == 0 {
        return Ok(vec![0]);
    }
    bk(0, full, 0, &comp, &mut out)?;
    out.sort_unstable();
    Ok(out)
}

/// Exact fractional chromatic number with both LP certificates.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiF {
    pub value: BigRational,
    /// Independent sets with their positive weights (fractional coloring).
    pub coloring: Vec<(u64, BigRational)>,
    /// Node weights of a fractional clique with the same total.
    pub clique: Vec<BigRational>,
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Maximize `sum(y)` subject to `A y <= 1`, `y >= 0` where row `i` of `A` is
/// the indicator of `rows[i]`. Returns `(y, dual)`.
fn simplex_packing(rows: &[u64], n: usize) -> (Vec<BigRational>, Vec<BigRational>) {
    let m = rows.len();
    let width = n + m + 1;
    // Tableau rows 0..m, objective row m; column n+m is the right-hand side.
    let mut t: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); width]; m + 1];
    for (i, &r) in rows.iter().enumerate() {
        for v in 0..n {
            if r >> v & 1 == 1 {
                t[i][v] = BigRational::one();
            }
        }
        t[i][n + i] = BigRational::one();
        t[i][n + m] = BigRational::one();
    }
    for v in 0..n {
        t[m][v] = rat(-1);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        // Bland: smallest column with a negative reduced cost.
        let Some(col) = (0..n + m).find(|&j| t[m][j].is_negative()) else { break };
        let mut pivot: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][col].is_positive() {
                let ratio = &t[i][n + m] / &t[i][col];
                let better = match &pivot {
                    None => true,
                    Some((pi, pr)) => ratio < *pr || (ratio == *pr && basis[i] < basis[*pi]),
                };
                if better {
                    pivot = Some((i, ratio));
                }
            }
        }
        let (row, _) = pivot.expect("packing LP is bounded");
        let inv = t[row][col].clone();
        for x in t[row].iter_mut() {
            *x /= &inv;
        }
        let pivot_row = t[row].clone();
        for (i, r) in t.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (x, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        basis[row] = col;
    }
    let mut y = vec![BigRational::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            y[b] = t[i][n + m].clone();
        }
    }
    let dual: Vec<BigRational> = (0..m).map(|i| t[m][n + i].clone()).collect();
    (y, dual)
}

/// Exact χ_f via the independent-set covering LP (solved through its dual).
pub fn chi_f_exact(g: &Graph) -> Result<ChiF, OracleError> {
    let n = g.n();
    if n > CHI_F_CAP {
        return Err(OracleError::TooLarge { what: "chi_f_exact", cap: CHI_F_CAP, n });
    }
    if n == 0 {
        return Ok(ChiF { value: BigRational::zero(), coloring: Vec::new(), clique: Vec::new() });
    }
    let sets = maximal_independent_sets(g)?;
    let (clique, weights) = simplex_packing(&sets, n);
    let value: BigRational = clique.iter().cloned().sum();
    let coloring: Vec<(u64, BigRational)> =
        sets.iter().copied().zip(weights).filter(|(_, w)| w.is_positive()).collect();
    // Both certificates must be feasible and agree.
    let total: BigRational = coloring.iter().map(|(_, w)| w.clone()).sum();
    if total != value {
        return Err(OracleError::Certificate(format!("primal {total} != dual {value}")));
    }
    for v in 0..n {
        let cover: BigRational = coloring.iter().filter(|(s, _)| s >> v & 1 == 1).map(|(_, w)| w.clone()).sum();
        if cover < BigRational::one() {
            return Err(OracleError::Certificate(format!("node {v} covered {cover} < 1")));
        }
        if clique[v].is_negative() {
            return Err(OracleError::Certificate(format!("negative clique weight at {v}")));
        }
    }
    for &s in &sets {
        let load: BigRational = (0..n).filter(|&v| s >> v & 1 == 1).map(|v| clique[v].clone()).sum();
        if load > BigRational::one() {
            return Err(OracleError::Certificate("fractional clique exceeds 1 on a set".into()));
        }
    }
    Ok(ChiF { value, coloring, clique })
}

/// Exact independence number by branch and bound.
pub fn independence_number(g: &Graph) -> Result<usize, OracleError> {
    let n = g.n();
    if n > ALPHA_CAP {
        return Err(OracleError::TooLarge { what: "independence_number", cap: ALPHA_CAP, n });
    }
    let adj: Vec<u64> = (0..n).map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w)).collect();
    fn go(p: u64, size: usize, best: &mut usize, adj: &[u64]) {
        if p == 0 {
            *best = (*best).max(size);
            return;
        }
        if size + p.count_ones() as usize <= *best {
            return;
        }
        // Some node of the closed neighborhood of a minimum-degree node is in
        // every maximal independent set.
        let mut bits = p;
        let mut v = 0;
        let mut min_deg = u32::MAX;
        while bits != 0 {
            let u = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let d = (adj[u] & p).count_ones();
            if d < min_deg {
                min_deg = d;
                v = u;
            }
        }
        let mut branch = (adj[v] & p) | 1 << v;
        while branch != 0 {
            let u = branch.trailing_zeros() as usize;
            branch &= branch - 1;
            go(p & !(adj[u] | 1 << u), size + 1, best, adj);
        }
    }
    let mut best = 0;
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    go(full, 0, &mut best, &adj);
    Ok(best)
}

/// Exact chromatic number by backtracking over increasing palette sizes.
pub fn chromatic_number(g: &Graph) -> Result<usize, OracleError> {
    let n = g.n();
    if n > CHROMATIC_CAP {
        return Err(OracleError::TooLarge { what: "chromatic_number", cap: CHROMATIC_CAP, n });
    }
    if n == 0 {
        return Ok(0);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    fn fits(g: &Graph, order: &[usize], i: usize, k: usize, colors: &mut Vec<usize>, used: usize) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        // New colors are interchangeable: try at most one unused color.
        for c in 0..k.min(used + 1) {
            if g.neighbors(v).iter().all(|&w| colors[w] != c) {
                colors[v] = c;
                if fits(g, order, i + 1, k, colors, used.max(c + 1)) {
                    return true;
                }
                colors[v] = usize::MAX;
            }
        }
        false
    }
    (1..=n)
        .find(|&k| fits(g, &order, 0, k, &mut vec![usize::MAX; n], 0))
        .ok_or(OracleError::Certificate("no coloring found".into()))
}

/// Exact facts about one small graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCertificate {
    pub graph_hash: String,
    pub n: usize,
    pub independence_number: Option<usize>,
    /// Exact rational as `"num/den"`.
    pub chi_f: Option<String>,
    pub girth: Option<usize>,
    pub notes: Vec<String>,
}

pub fn graph_hash(g: &Graph) -> String {
    let mut h = DefaultHasher::new();
    g.to_edge_list().hash(&mut h);
    format!("{:016x}", h.finish())
}

/// Everything the oracles can compute within their caps.
pub fn certificate(g: &Graph) -> OracleCertificate {
    let mut notes = Vec::new();
    let alpha = match independence_number(g) {
        Ok(a) => {
            notes.push("independence number by branch and bound".into());
            Some(a)
        }
        Err(e) => {
            notes.push(e.to_string());
            None
        }
    };
    let chi_f = match chi_f_exact(g) {
        Ok(c) => {
            notes.push(format!("chi_f by exact simplex over {} weighted sets", c.coloring.len()));
            Some(c.value.to_string())
        }
        Err(e) => {
            notes.push(e.to_string());
            None
        }
    };
    OracleCertificate { graph_hash: graph_hash(g), n: g.n(), independence_number: alpha, chi_f, girth: g.girth(), notes }
}

/// Facts about the subdivided graph `H` built from `base` with half path length `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundReport {
    pub nodes: usize,
    pub girth: Option<usize>,
    pub independence_number: usize,
    /// `n/c + m k` with `c = n / α(base)`, i.e. `α(base) + m k`.
    pub independence_bound: usize,
    /// Exact χ_f when within the LP cap.
    pub chi_f: Option<BigRational>,
    /// Certified lower bound on χ_f: the exact value, or `N / α(H)`.
    pub chi_f_lower: BigRational,
    /// `chi_f_lower - 2`.
    pub margin: BigRational,
    pub base_has_odd_cycle: bool,
}

pub fn certify_lowerbound_family(base: &Graph, k: usize) -> Result<LowerBoundReport, OracleError> {
    let h = subdivide_edges(&SubdivisionSpec { k, base })?;
    let alpha_h = independence_number(&h)?;
    let alpha_base = independence_number(base)?;
    let chi_f = if h.n() <= CHI_F_CAP { Some(chi_f_exact(&h)?.value) } else { None };
    let ratio = BigRational::new(BigInt::from(h.n()), BigInt::from(alpha_h.max(1)));
    let chi_f_lower = chi_f.clone().unwrap_or(ratio);
    let margin = &chi_f_lower - rat(2);
    Ok(LowerBoundReport {
        nodes: h.n(),
        girth: h.girth(),
        independence_number: alpha_h,
        independence_bound: alpha_base + base.m() * k,
        chi_f,
        margin,
        chi_f_lower,
        base_has_odd_cycle: base.bipartition().is_none(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiameterMode {
    Strong,
    Weak,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringReport {
    /// Assignment and member lists agree; centers lie in their clusters or
    /// are unclustered.
    pub consistent: bool,
    /// Per cluster; `None` if disconnected under strong distances.
    pub diameters: Vec<Option<usize>>,
    pub max_diameter: Option<usize>,
    pub separated: bool,
    pub separation_witness: Option<(usize, usize)>,
    pub unclustered_fraction: f64,
}

/// Exact diameters, separation (distinct clusters at least `separation` hops
/// apart) and unclustered fraction.
pub fn check_clustering(g: &Graph, cl: &Clustering, mode: DiameterMode, separation: usize) -> ClusteringReport {
    let mut consistent = cl.assignment.len() == g.n();
    for (i, c) in cl.clusters.iter().enumerate() {
        consistent &= c.members.iter().all(|&v| cl.assignment.get(v) == Some(&Some(i)));
        // A center dropped by boundary removal still labels its cluster.
        consistent &= matches!(cl.assignment.get(c.center), Some(&Some(j)) if j == i) || cl.assignment.get(c.center) == Some(&None);
    }
    let assigned = cl.assignment.iter().filter(|a| a.is_some()).count();
    consistent &= assigned == cl.clusters.iter().map(|c| c.members.len()).sum::<usize>();
    let diameters: Vec<Option<usize>> = cl
        .clusters
        .iter()
        .map(|c| {
            let (strong, weak) = crate::clustering::diameters(g, &c.members);
            match mode {
                DiameterMode::Strong => strong,
                DiameterMode::Weak => Some(weak),
            }
        })
        .collect();
    let max_diameter = diameters.iter().try_fold(0usize, |acc, d| d.map(|d| acc.max(d)));
    let mut separation_witness = None;
    if separation > 1 {
        'outer: for v in 0..g.n() {
            let Some(a) = cl.assignment[v] else { continue };
            let near = g.bfs_limited(v, separation - 1);
            for u in 0..g.n() {
                if near[u].is_some() {
                    if let Some(b) = cl.assignment[u] {
                        if a != b {
                            separation_witness = Some((v, u));
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    ClusteringReport {
        consistent,
        diameters,
        max_diameter,
        separated: separation_witness.is_none(),
        separation_witness,
        unclustered_fraction: (g.n() - assigned) as f64 / g.n().max(1) as f64,
    }
}

/// Re-verify a cluster's class witness independently of the clustering code.
pub fn check_cluster_class(g: &Graph, members: &[usize], class: &ClusterClass, q: usize) -> bool {
    match class {
        ClusterClass::Large => members.len() >= q,
        ClusterClass::LowDegree { witness } => members.contains(witness) && g.degree(*witness) < g.delta(),
        ClusterClass::Choosable { component } => {
            let interior = component
                .iter()
                .all(|v| members.contains(v) && g.neighbors(*v).iter().all(|w| members.contains(w)));
            interior && degree_choosable_exhaustive(g, component, 6).unwrap_or(false)
        }
    }
}

/// Try every list assignment with `|L_v| = deg(v)` drawn from `1..=palette`
/// (capped at the total degree) and check each is colorable. `None` if the
/// search space is too large.
pub fn degree_choosable_exhaustive(g: &Graph, component: &[usize], palette: usize) -> Option<bool> {
    let h = g.induced(component);
    let n = h.n();
    if n == 0 || h.components().len() != 1 {
        return Some(false);
    }
    let total: usize = (0..n).map(|v| h.degree(v)).sum();
    let palette = palette.min(total).max(1);
    let options: Vec<Vec<u32>> = (0..n)
        .map(|v| (0u32..(1u32 << palette)).filter(|m| m.count_ones() as usize == h.degree(v)).collect())
        .collect();
    let space: f64 = options.iter().map(|o| o.len() as f64).product();
    if space > 2e6 || options.iter().any(Vec::is_empty) {
        return None;
    }
    fn colorable(h: &Graph, lists: &[u32], i: usize, chosen: &mut [u32]) -> bool {
        if i == lists.len() {
            return true;
        }
        let mut cand = lists[i];
        while cand != 0 {
            let c = cand & cand.wrapping_neg();
            cand &= cand - 1;
            if h.neighbors(i).iter().all(|&w| w >= i || chosen[w] != c) {
                chosen[i] = c;
                if colorable(h, lists, i + 1, chosen) {
                    return true;
                }
            }
        }
        false
    }
    let mut idx = vec![0usize; n];
    loop {
        let lists: Vec<u32> = (0..n).map(|v| options[v][idx[v]]).collect();
        if !colorable(&h, &lists, 0, &mut vec![0; n]) {
            return Some(false);
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return Some(true);
            }
            idx[pos] += 1;
            if idx[pos] < options[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Float value of an exact rational.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::Clustering;
    use crate::graph::{complete, complete_bipartite, cycle, path, petersen};

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn multicoloring_examples() {
        let c5 = cycle(5).unwrap();
        let mc = MultiColoring { p: 5, q: 2, sets: vec![vec![1, 2], vec![3, 4], vec![1, 5], vec![2, 3], vec![4, 5]] };
        let rep = check_multicoloring(&c5, &mc);
        assert!(rep.valid && rep.complete);
        assert_eq!(rep.ratio, Some(2.5));

        let bad = MultiColoring { p: 5, q: 1, sets: vec![vec![1], vec![1], vec![2], vec![3], vec![4]] };
        let rep = check_multicoloring(&c5, &bad);
        assert!(!rep.valid);
        assert_eq!(rep.witness, Some(Violation::SharedColor { u: 0, v: 1, color: 1 }));

        let partial = MultiColoring { p: 3, q: 1, sets: vec![vec![1], vec![2], vec![1], vec![2], vec![]] };
        let rep = check_multicoloring(&c5, &partial);
        assert!(rep.valid && !rep.complete);
    }

    #[test]
    fn chi_f_examples() {
        assert_eq!(chi_f_exact(&complete(4)).unwrap().value, r(4, 1));
        assert_eq!(chi_f_exact(&cycle(5).unwrap()).unwrap().value, r(5, 2));
        assert_eq!(chi_f_exact(&petersen()).unwrap().value, r(5, 2));
        assert_eq!(chi_f_exact(&path(5)).unwrap().value, r(2, 1));
    }

    #[test]
    fn mis_enumeration_on_c5() {
        assert_eq!(maximal_independent_sets(&cycle(5).unwrap()).unwrap().len(), 5);
    }

    #[test]
    fn independence_examples() {
        assert_eq!(independence_number(&cycle(5).unwrap()).unwrap(), 2);
        assert_eq!(independence_number(&petersen()).unwrap(), 4);
        assert_eq!(independence_number(&complete_bipartite(3, 3)).unwrap(), 3);
    }

    #[test]
    fn chromatic_examples() {
        assert_eq!(chromatic_number(&petersen()).unwrap(), 3);
        assert_eq!(chromatic_number(&complete(5)).unwrap(), 5);
        assert_eq!(chromatic_number(&cycle(6).unwrap()).unwrap(), 2);
    }

    #[test]
    fn lower_bound_family_triangle() {
        let rep = certify_lowerbound_family(&complete(3), 1).unwrap();
        assert_eq!(rep.nodes, 9);
        assert_eq!(rep.girth, Some(9));
        assert_eq!(rep.chi_f, Some(r(9, 4)));
        assert!(rep.margin > BigRational::zero());
        let bip = certify_lowerbound_family(&cycle(4).unwrap(), 1).unwrap();
        assert_eq!(bip.margin, BigRational::zero());
    }

    #[test]
    fn clustering_checks() {
        let g = path(4);
        let singles = Clustering::from_centers(&g, &[Some(0), Some(1), Some(2), Some(3)]);
        let rep = check_clustering(&g, &singles, DiameterMode::Strong, 1);
        assert_eq!(rep.max_diameter, Some(0));
        assert!(rep.consistent);
        let rep = check_clustering(&g, &singles, DiameterMode::Weak, 2);
        assert!(!rep.separated);
        let sep = Clustering::from_centers(&g, &[Some(0), None, Some(2), Some(2)]);
        let rep = check_clustering(&g, &sep, DiameterMode::Strong, 2);
        assert!(rep.separated);
        assert_eq!(rep.unclustered_fraction, 0.25);
    }

    #[test]
    fn exhaustive_choosability_agrees_with_gallai() {
        let c4 = cycle(4).unwrap();
        assert_eq!(degree_choosable_exhaustive(&c4, &[0, 1, 2, 3], 6), Some(true));
        let c5 = cycle(5).unwrap();
        assert_eq!(degree_choosable_exhaustive(&c5, &[0, 1, 2, 3, 4], 6), Some(false));
        let k4 = complete(4);
        assert_eq!(degree_choosable_exhaustive(&k4, &[0, 1, 2, 3], 5), Some(false));
    }
}
