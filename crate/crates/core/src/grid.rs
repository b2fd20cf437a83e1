//! Multicoloring of d-dimensional grids and tori with ratio close to 2, and a
//! constant-round wrapper that keeps only the outputs of happy nodes.

use thiserror::Error;

use crate::coloring::{Color, MultiColoring, Outcome, PartialColoring, ProperColoring, RoundLedger};
use crate::frac::{FracError, PartialMulticolorer};
use crate::graph::{Graph, GraphError, Metric};
use crate::primitives::{self, PrimitiveError};

/// Extra colors of the one-dimensional circular scheme.
pub const CYCLE_SLACK: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("input graph carries no grid coordinates")]
    NotAGrid,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Primitive(#[from] PrimitiveError),
    #[error("cycle segment of length {len} admits no ({palette}:{q})-coloring")]
    SegmentTooShort { len: usize, palette: usize, q: usize },
    #[error("palette {palette} exceeds the bound {bound} for d={d}, q={q}")]
    PaletteBound { palette: usize, bound: usize, d: usize, q: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

/// Separation of the centers: `q + 2·6^d`.
pub fn spacing(q: usize, d: usize) -> usize {
    q + 2 * 6usize.pow(d as u32)
}

/// Palette of [`grid_multicolor_logstar`].
pub fn grid_palette(q: usize, d: usize) -> usize {
    if d == 1 {
        2 * q + CYCLE_SLACK
    } else {
        2 * q + (2 * d + 1) * q
    }
}

#[derive(Debug, Clone)]
pub struct GridColoring {
    pub coloring: MultiColoring,
    /// Centers of the cells (an MIS of the infinity-norm power graph).
    pub centers: Vec<usize>,
    /// Nodes that use the reserve colors (d >= 2).
    pub reserve: Vec<usize>,
}

/// Exact `(2q:q)`-coloring when the graph is bipartite.
pub fn grid_parity_coloring(g: &Graph, q: usize) -> Option<MultiColoring> {
    let side = g.bipartition()?;
    let q64 = q as Color;
    let sets = side.iter().map(|&s| (1..=q64).map(|c| if s { c + q64 } else { c }).collect()).collect();
    Some(MultiColoring { p: 2 * q64, q, sets })
}

/// Shift sequence for a segment of `len` steps that returns to offset 0
/// modulo `palette`, every shift in `q ..= palette - q`.
fn segment_shifts(len: usize, q: usize, palette: usize) -> Option<Vec<usize>> {
    let slack = palette - 2 * q;
    let low = len * q;
    let m = low.div_ceil(palette) * palette;
    let mut extra = m - low;
    if extra > len * slack {
        return None;
    }
    Some(
        (0..len)
            .map(|_| {
                let e = extra.min(slack);
                extra -= e;
                q + e
            })
            .collect(),
    )
}

fn arc(start: usize, q: usize, palette: usize) -> Vec<Color> {
    let mut s: Vec<Color> = (0..q).map(|t| ((start + t) % palette) as Color + 1).collect();
    s.sort_unstable();
    s
}

/// Hops covering one step of the infinity-norm power graph.
fn hop_cost(d: usize, ell: usize) -> usize {
    d * ell
}

/// Cell-based `(P:q)`-coloring with `P = 2q+3` for `d = 1` and
/// `P = 2q + (2d+1)q` otherwise. A proper precoloring of the distance-`dℓ`
/// power graph replaces identifiers, which makes the round count independent
/// of `n`.
pub fn grid_multicolor_logstar(
    g: &Graph,
    q: usize,
    precoloring: Option<&ProperColoring>,
) -> Result<Outcome<GridColoring>, GridError> {
    let spec = g.grid().ok_or(GridError::NotAGrid)?.clone();
    let d = spec.dimension();
    if q == 0 {
        return Err(GridError::InvalidParameters("q must be >= 1".into()));
    }
    let palette = grid_palette(q, d);
    let bound = 2 * q + 4 * 6usize.pow(d as u32);
    if palette > bound {
        return Err(GridError::PaletteBound { palette, bound, d, q });
    }
    let ell = spacing(q, d);
    let h = g.power(ell, Metric::InfinityNorm)?;
    let helper = match precoloring {
        Some(pre) => primitives::linial_from(&h, pre)?,
        None => primitives::linial_coloring(&h)?,
    };
    let in_mis = primitives::mis(&h, &helper.value)?.value;
    let centers: Vec<usize> = (0..g.n()).filter(|&v| in_mis[v]).collect();
    let mut ledger = RoundLedger::default();
    ledger.record("grid/linial-power", helper.rounds * hop_cost(d, ell));
    ledger.record("grid/mis", helper.value.palette as usize * hop_cost(d, ell));
    let (coloring, reserve) = if d == 1 {
        ledger.record("grid/segments", 2 * ell + 1);
        (color_segments(g, &centers, q, palette)?, Vec::new())
    } else {
        let (mc, reserve, rounds) = color_cells(g, &centers, q, palette, precoloring)?;
        ledger.record("grid/cells", hop_cost(d, ell) + 1);
        ledger.record("grid/reserve", rounds);
        (mc, reserve)
    };
    Ok(Outcome::from_ledger(GridColoring { coloring, centers, reserve }, ledger))
}

fn color_segments(g: &Graph, centers: &[usize], q: usize, palette: usize) -> Result<MultiColoring, GridError> {
    let spec = g.grid().ok_or(GridError::NotAGrid)?;
    let n = spec.side_lengths[0];
    let wrap = spec.wrap[0];
    let x = |v: usize| g.coords(v).map_or(0, |c| c[0]) as usize;
    let mut cx: Vec<usize> = centers.iter().map(|&c| x(c)).collect();
    cx.sort_unstable();
    // Arc start for each coordinate.
    let mut start = vec![0usize; n];
    if cx.is_empty() {
        return Ok(MultiColoring::empty(g.n(), palette as Color, q));
    }
    let k = cx.len();
    let segments = if wrap { k } else { k - 1 };
    for i in 0..segments {
        let from = cx[i];
        let len = if i + 1 < k { cx[i + 1] - from } else { cx[0] + n - from };
        let shifts =
            segment_shifts(len, q, palette).ok_or(GridError::SegmentTooShort { len, palette, q })?;
        let mut s = 0;
        for j in 0..len {
            start[(from + j) % n] = s;
            s = (s + shifts[j]) % palette;
        }
    }
    if !wrap {
        for xx in 0..cx[0] {
            start[xx] = (palette - (cx[0] - xx) * q % palette) % palette;
        }
        for xx in cx[k - 1]..n {
            start[xx] = (xx - cx[k - 1]) * q % palette;
        }
    }
    let sets = (0..g.n()).map(|v| arc(start[x(v)], q, palette)).collect();
    Ok(MultiColoring { p: palette as Color, q, sets })
}

fn color_cells(
    g: &Graph,
    centers: &[usize],
    q: usize,
    palette: usize,
    precoloring: Option<&ProperColoring>,
) -> Result<(MultiColoring, Vec<usize>, usize), GridError> {
    let spec = g.grid().ok_or(GridError::NotAGrid)?;
    let d = spec.dimension();
    let coord = |v: usize| g.coords(v).expect("grid node without coordinates");
    let cell: Vec<usize> = (0..g.n())
        .map(|v| {
            *centers
                .iter()
                .min_by_key(|&&c| (spec.inf_distance(coord(v), coord(c)), g.id(c)))
                .expect("no centers")
        })
        .collect();
    let parity: Vec<bool> = (0..g.n())
        .map(|v| {
            let c = coord(cell[v]);
            let s: i64 = (0..d).map(|a| spec.displacement(a, c[a], coord(v)[a])).sum();
            s.rem_euclid(2) == 1
        })
        .collect();
    let mut in_reserve = vec![false; g.n()];
    for (u, v) in g.edges() {
        if parity[u] == parity[v] {
            let key = |w: usize| (g.id(cell[w]), g.id(w));
            let pick = if key(u) > key(v) { u } else { v };
            in_reserve[pick] = true;
        }
    }
    let reserve: Vec<usize> = (0..g.n()).filter(|&v| in_reserve[v]).collect();
    let q64 = q as Color;
    let mut sets: Vec<Vec<Color>> =
        parity.iter().map(|&p| (1..=q64).map(|c| if p { c + q64 } else { c }).collect()).collect();
    let mut rounds = 0;
    if !reserve.is_empty() {
        let sub = g.induced(&reserve);
        let helper = match precoloring {
            Some(pre) => primitives::linial_from(&sub, &pre.restrict(&reserve))?,
            None => primitives::linial_coloring(&sub)?,
        };
        let blocks = (2 * d + 1) as Color;
        let reduced = primitives::color_reduction(&sub, &helper.value, blocks)?;
        rounds = helper.rounds + helper.value.palette.saturating_sub(blocks) as usize;
        for (i, &v) in reserve.iter().enumerate() {
            let b = reduced.value.colors[i];
            sets[v] = (1..=q64).map(|c| 2 * q64 + (b - 1) * q64 + c).collect();
        }
    }
    Ok((MultiColoring { p: palette as Color, q, sets }, reserve, rounds))
}

/// Parameters of the constant-round wrapper.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantTimeConfig {
    /// Palette of the random precoloring; derived from `epsilon` if absent.
    pub palette: Option<Color>,
    /// Rule for coloring the nodes whose random color clashed.
    pub fill: Fill,
}

impl Default for ConstantTimeConfig {
    fn default() -> Self {
        ConstantTimeConfig { palette: None, fill: Fill::Smallest }
    }
}

/// How nodes without a random color get one before the inner run; happy
/// nodes never depend on this choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fill {
    Smallest,
    Largest,
}

#[derive(Debug, Clone)]
pub struct ConstantTimeResult {
    /// Unhappy nodes have empty sets.
    pub coloring: MultiColoring,
    pub happy: Vec<bool>,
    pub precolored: Vec<bool>,
    /// Palette of the random precoloring.
    pub precolor_palette: Color,
    /// Rounds of the inner coloring; the happiness radius.
    pub inner_rounds: usize,
}

impl ConstantTimeResult {
    pub fn unhappy_fraction(&self) -> f64 {
        let n = self.happy.len().max(1);
        self.happy.iter().filter(|&&h| !h).count() as f64 / n as f64
    }
}

fn ball_volume(radius: usize, d: usize) -> f64 {
    ((2 * radius + 1) as f64).powi(d as i32)
}

/// Rounds of [`grid_multicolor_logstar`] started from a `palette`-coloring,
/// computed from the schedule alone (reserve phase bounded by its worst case).
pub fn inner_rounds(q: usize, d: usize, palette: Color) -> usize {
    let ell = spacing(q, d);
    let delta_h = (2 * ell + 1).pow(d as u32) - 1;
    let linial = primitives::linial_schedule(palette, delta_h);
    let out = linial.last().map_or(palette, |s| s.palette_out());
    let mut r = (linial.len() + out as usize) * hop_cost(d, ell);
    r += if d == 1 { 2 * ell + 1 } else { hop_cost(d, ell) + 1 };
    if d >= 2 {
        let res = primitives::linial_schedule(palette, 2 * d);
        let out = res.last().map_or(palette, |s| s.palette_out());
        r += res.len() + out as usize;
    }
    r
}

/// Default precoloring palette: the expected number of clashes seen by a node
/// within its execution radius is at most `epsilon`.
pub fn default_precolor_palette(q: usize, d: usize, epsilon: f64) -> Color {
    let radius = d * spacing(q, d);
    let mut c: Color = 1 << 20;
    for _ in 0..4 {
        let t = inner_rounds(q, d, c);
        c = (ball_volume(t, d) * ball_volume(radius, d) / epsilon).ceil().min(1e15) as Color;
    }
    c
}

/// Random distance-`dℓ` precoloring, then the inner coloring; a node keeps
/// its colors only if every node within the inner round count was
/// precolored. The round count depends on `q`, `d` and `epsilon` only.
pub fn grid_constant_time(
    g: &Graph,
    q: usize,
    epsilon: f64,
    seed: u64,
    cfg: &ConstantTimeConfig,
) -> Result<Outcome<ConstantTimeResult>, GridError> {
    let d = g.grid().ok_or(GridError::NotAGrid)?.dimension();
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(GridError::InvalidParameters(format!("epsilon must lie in (0,1), got {epsilon}")));
    }
    let radius = d * spacing(q, d);
    let c = cfg.palette.unwrap_or_else(|| default_precolor_palette(q, d, epsilon));
    let pre = primitives::random_distance_coloring(g, radius, c, seed)?;
    let precolored: Vec<bool> = pre.value.colors.iter().map(Option::is_some).collect();
    let full = complete_precoloring(g, &pre.value, radius, cfg.fill)?;
    let inner = grid_multicolor_logstar(g, q, Some(&full))?;
    let t = inner_rounds(q, d, c);
    let happy: Vec<bool> = (0..g.n())
        .map(|v| g.bfs_limited(v, t).iter().enumerate().all(|(u, du)| du.is_none() || precolored[u]))
        .collect();
    let mut coloring = inner.value.coloring;
    for v in 0..g.n() {
        if !happy[v] {
            coloring.sets[v].clear();
        }
    }
    let mut ledger = pre.ledger.clone();
    ledger.record("inner", t);
    Ok(Outcome::from_ledger(
        ConstantTimeResult { coloring, happy, precolored, precolor_palette: c, inner_rounds: t },
        ledger,
    ))
}

/// Give every uncolored node a color unused within `radius` hops.
fn complete_precoloring(g: &Graph, pre: &PartialColoring, radius: usize, fill: Fill) -> Result<ProperColoring, GridError> {
    let mut colors = pre.colors.clone();
    for v in 0..g.n() {
        if colors[v].is_some() {
            continue;
        }
        let used: std::collections::HashSet<Color> = g
            .bfs_limited(v, radius)
            .iter()
            .enumerate()
            .filter_map(|(u, du)| du.and(colors[u]))
            .collect();
        let free = match fill {
            Fill::Smallest => (1..=pre.palette).find(|c| !used.contains(c)),
            Fill::Largest => (1..=pre.palette).rev().find(|c| !used.contains(c)),
        };
        colors[v] = Some(free.ok_or_else(|| {
            GridError::InvalidParameters(format!("precoloring palette {} too small to complete", pre.palette))
        })?);
    }
    Ok(ProperColoring { palette: pre.palette, colors: colors.into_iter().map(|c| c.unwrap_or(1)).collect() })
}

/// [`grid_constant_time`] as an amplification base.
pub struct GridBase<'a> {
    pub g: &'a Graph,
    pub q: usize,
    pub epsilon: f64,
    pub config: ConstantTimeConfig,
}

impl PartialMulticolorer for GridBase<'_> {
    fn palette(&self) -> Color {
        self.g.grid().map_or(0, |s| grid_palette(self.q, s.dimension())) as Color
    }
    fn target(&self) -> usize {
        self.q
    }
    fn n(&self) -> usize {
        self.g.n()
    }
    fn run(&self, seed: u64) -> Result<Outcome<MultiColoring>, FracError> {
        let out = grid_constant_time(self.g, self.q, self.epsilon, seed, &self.config)
            .map_err(|e| FracError::InvalidParameters(e.to_string()))?;
        Ok(Outcome { value: out.value.coloring, rounds: out.rounds, ledger: out.ledger })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_grid, GridSpec};
    use crate::oracle::check_multicoloring;

    fn ring(n: usize) -> Graph {
        generate_grid(&GridSpec::torus(vec![n]).unwrap()).unwrap()
    }

    #[test]
    fn segment_shifts_close_the_circle() {
        for len in 14..60 {
            for q in 1..=8 {
                let p = 2 * q + CYCLE_SLACK;
                let s = segment_shifts(len, q, p).unwrap();
                assert_eq!(s.iter().sum::<usize>() % p, 0);
                assert!(s.iter().all(|&x| x >= q && x <= p - q));
            }
        }
        assert!(segment_shifts(5, 8, 19).is_none());
    }

    #[test]
    fn cycle_coloring_ratio() {
        for n in [60, 61, 77] {
            let g = ring(n);
            let out = grid_multicolor_logstar(&g, 8, None).unwrap().value;
            let rep = check_multicoloring(&g, &out.coloring);
            assert!(rep.valid && rep.complete, "n={n}: {rep:?}");
            assert_eq!(out.coloring.p, 19);
        }
    }

    #[test]
    fn path_coloring() {
        let g = generate_grid(&GridSpec::new(vec![50], vec![false]).unwrap()).unwrap();
        let out = grid_multicolor_logstar(&g, 4, None).unwrap().value;
        let rep = check_multicoloring(&g, &out.coloring);
        assert!(rep.valid && rep.complete);
    }

    #[test]
    fn even_cycle_parity() {
        let g = ring(10);
        let mc = grid_parity_coloring(&g, 1).unwrap();
        assert_eq!(mc.p, 2);
        assert!(check_multicoloring(&g, &mc).valid);
        assert!(grid_parity_coloring(&ring(11), 1).is_none());
    }

    #[test]
    fn odd_torus_uses_reserve() {
        let g = generate_grid(&GridSpec::torus(vec![9, 7]).unwrap()).unwrap();
        let out = grid_multicolor_logstar(&g, 2, None).unwrap().value;
        let rep = check_multicoloring(&g, &out.coloring);
        assert!(rep.valid && rep.complete, "{rep:?}");
        assert!(!out.reserve.is_empty());
        assert_eq!(out.coloring.p, 14);
    }

    #[test]
    fn huge_palette_makes_everyone_happy() {
        let g = ring(60);
        let cfg = ConstantTimeConfig { palette: Some(1 << 50), ..Default::default() };
        let out = grid_constant_time(&g, 4, 0.2, 1, &cfg).unwrap().value;
        assert!(out.happy.iter().all(|&h| h));
        assert!(check_multicoloring(&g, &out.coloring).complete);
    }

    #[test]
    fn rounds_flat_in_n() {
        let cfg = ConstantTimeConfig::default();
        let r: Vec<usize> =
            [60, 120].iter().map(|&n| grid_constant_time(&ring(n), 8, 0.2, 3, &cfg).unwrap().rounds).collect();
        assert_eq!(r[0], r[1]);
    }
}
