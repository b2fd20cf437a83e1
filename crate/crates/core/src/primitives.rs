//! Classical LOCAL building blocks, each a node program run on the engine.

use std::collections::{BTreeMap, HashSet};

use rand::seq::IndexedRandom;
use rand::Rng;
use thiserror::Error;

use crate::coloring::{Color, ListAssignment, Outcome, PartialColoring, ProperColoring};
use crate::graph::{Graph, GraphError, Metric};
use crate::sim::{self, Action, Envelope, NodeContext, NodeProgram, NodeRng, ProgramError, SimError, Wake};

/// Palette guarantee of [`linial_coloring`]: at most `LINIAL_K * max(Δ,1)^2` colors.
pub const LINIAL_K: u64 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrimitiveError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("target palette {target} is below Δ+1 = {}", .delta + 1)]
    TargetTooSmall { target: Color, delta: usize },
    #[error("node {node}: list of size {len} does not exceed its degree {degree}")]
    ListTooShort { node: usize, len: usize, degree: usize },
    #[error("input coloring is not proper on edge ({0}, {1})")]
    ImproperInput(usize, usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= x {
        if x % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn next_prime(mut x: u64) -> u64 {
    x = x.max(2);
    while !is_prime(x) {
        x += 1;
    }
    x
}

/// Smallest `r` with `r^e >= c`.
fn int_root_ceil(c: u64, e: u32) -> u64 {
    let mut r = (c as f64).powf(1.0 / e as f64).floor().max(1.0) as u64;
    while r > 1 && pow_at_least(r - 1, e, c) {
        r -= 1;
    }
    while !pow_at_least(r, e, c) {
        r += 1;
    }
    r
}

fn pow_at_least(base: u64, e: u32, target: u64) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc *= base as u128;
        if acc >= target as u128 {
            return true;
        }
    }
    acc >= target as u128
}

/// One polynomial reduction step: colors `< palette_in` are read as degree-`d`
/// polynomials over GF(`p`) and mapped into `p^2` colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinialStep {
    pub palette_in: u64,
    pub p: u64,
    pub d: u32,
}

impl LinialStep {
    pub fn palette_out(&self) -> u64 {
        self.p * self.p
    }

    fn eval(&self, color: u64, x: u64) -> u64 {
        let p = self.p as u128;
        let mut coeffs = Vec::with_capacity(self.d as usize + 1);
        let mut rest = color;
        for _ in 0..=self.d {
            coeffs.push((rest % self.p) as u128);
            rest /= self.p;
        }
        coeffs.iter().rev().fold(0u128, |acc, &a| (acc * x as u128 + a) % p) as u64
    }

    /// New color of a node with `own` color whose neighbors have `others`.
    pub fn apply(&self, own: u64, others: &[u64]) -> Option<u64> {
        (0..self.p)
            .find(|&x| {
                let mine = self.eval(own, x);
                others.iter().all(|&o| self.eval(o, x) != mine)
            })
            .map(|x| x * self.p + self.eval(own, x))
    }
}

/// Reduction schedule from `palette` colors under maximum degree `delta`.
pub fn linial_schedule(palette: u64, delta: usize) -> Vec<LinialStep> {
    let delta = delta.max(1) as u64;
    let mut steps = Vec::new();
    let mut c = palette;
    loop {
        let mut best: Option<LinialStep> = None;
        for d in 1..=62u32 {
            let p = next_prime((delta * d as u64 + 1).max(int_root_ceil(c, d + 1)));
            if best.is_none_or(|b| p < b.p) {
                best = Some(LinialStep { palette_in: c, p, d });
            }
            if delta * d as u64 + 1 > best.map_or(u64::MAX, |b| b.p) {
                break;
            }
        }
        match best {
            Some(step) if step.palette_out() < c => {
                c = step.palette_out();
                steps.push(step);
            }
            _ => return steps,
        }
    }
}

struct LinialProgram {
    steps: Vec<LinialStep>,
}

impl NodeProgram for LinialProgram {
    type Input = u64;
    type State = u64;
    type Msg = u64;
    type Output = Color;

    fn init(&self, ctx: &NodeContext<'_, u64>) -> u64 {
        *ctx.input
    }

    fn step(
        &self,
        _ctx: &NodeContext<'_, u64>,
        color: &mut u64,
        round: usize,
        inbox: &[Envelope<u64>],
        _rng: &mut NodeRng,
    ) -> Result<Action<u64, Color>, ProgramError> {
        if round > self.steps.len() {
            return Ok(Action::idle().wake(Wake::OnMessage));
        }
        if round > 0 {
            let others: Vec<u64> = inbox.iter().map(|e| e.msg).collect();
            *color = self.steps[round - 1]
                .apply(*color, &others)
                .ok_or_else(|| ProgramError("neighbor shares my color; input is not proper".into()))?;
        }
        let action = Action::send(*color);
        Ok(if round == self.steps.len() { action.with_output(*color + 1) } else { action })
    }
}

/// Proper `O(Δ²)` coloring from identifiers in `O(log* N)` rounds.
pub fn linial_coloring(g: &Graph) -> Result<Outcome<ProperColoring>, PrimitiveError> {
    let initial: Vec<u64> = g.ids().iter().map(|&id| id - 1).collect();
    linial_run(g, initial, g.id_space().max(1))
}

/// Same reduction, starting from a given proper coloring instead of identifiers.
pub fn linial_from(g: &Graph, input: &ProperColoring) -> Result<Outcome<ProperColoring>, PrimitiveError> {
    let initial: Vec<u64> = input.colors.iter().map(|&c| c - 1).collect();
    linial_run(g, initial, input.palette.max(1))
}

fn linial_run(g: &Graph, initial: Vec<u64>, palette: u64) -> Result<Outcome<ProperColoring>, PrimitiveError> {
    let steps = linial_schedule(palette, g.delta());
    let out_palette = steps.last().map_or(palette, LinialStep::palette_out);
    let prog = LinialProgram { steps };
    let cap = prog.steps.len();
    let run = sim::run(g, &prog, &initial, 0, cap)?;
    let colors = run.complete_outputs()?;
    Ok(Outcome::single(ProperColoring { palette: out_palette, colors }, "linial", run.rounds))
}

/// Rounds the reduction from `palette` colors takes, without running it.
pub fn linial_rounds(palette: u64, delta: usize) -> usize {
    linial_schedule(palette, delta).len()
}

/// Class sweep: the node whose turn is `t` decides in round `t`, knowing the
/// decisions of every neighbor that went before it.
struct Sweep<D, V, F> {
    decide: F,
    _marker: std::marker::PhantomData<fn(&D) -> V>,
}

struct SweepState<V> {
    known: Vec<V>,
    done: bool,
}

impl<D, V, F> NodeProgram for Sweep<D, V, F>
where
    D: Sync,
    V: Clone + Send + Sync,
    F: Fn(&D, &[V]) -> Result<V, String> + Sync,
{
    type Input = (usize, D);
    type State = SweepState<V>;
    type Msg = V;
    type Output = V;

    fn init(&self, _ctx: &NodeContext<'_, (usize, D)>) -> SweepState<V> {
        SweepState { known: Vec::new(), done: false }
    }

    fn step(
        &self,
        ctx: &NodeContext<'_, (usize, D)>,
        state: &mut SweepState<V>,
        round: usize,
        inbox: &[Envelope<V>],
        _rng: &mut NodeRng,
    ) -> Result<Action<V, V>, ProgramError> {
        state.known.extend(inbox.iter().map(|e| e.msg.clone()));
        let turn = ctx.input.0;
        if state.done || round < turn {
            return Ok(Action::idle().wake(if state.done { Wake::OnMessage } else { Wake::At(turn) }));
        }
        let value = (self.decide)(&ctx.input.1, &state.known).map_err(ProgramError)?;
        state.done = true;
        Ok(Action::send(value.clone()).with_output(value).wake(Wake::OnMessage))
    }
}

fn run_sweep<D, V, F>(g: &Graph, inputs: Vec<(usize, D)>, decide: F) -> Result<(Vec<V>, usize), PrimitiveError>
where
    D: Sync,
    V: Clone + Send + Sync,
    F: Fn(&D, &[V]) -> Result<V, String> + Sync,
{
    let cap = inputs.iter().map(|i| i.0).max().unwrap_or(0);
    let run = sim::run(g, &Sweep { decide, _marker: std::marker::PhantomData }, &inputs, 0, cap)?;
    let rounds = run.rounds;
    Ok((run.complete_outputs()?, rounds))
}

fn check_proper(g: &Graph, colors: &[Color]) -> Result<(), PrimitiveError> {
    match g.edges().into_iter().find(|&(u, v)| colors[u] == colors[v]) {
        Some((u, v)) => Err(PrimitiveError::ImproperInput(u, v)),
        None => Ok(()),
    }
}

/// Reduce a proper coloring to `target` colors, one color class per round.
pub fn color_reduction(
    g: &Graph,
    input: &ProperColoring,
    target: Color,
) -> Result<Outcome<ProperColoring>, PrimitiveError> {
    if target < g.delta() as Color + 1 {
        return Err(PrimitiveError::TargetTooSmall { target, delta: g.delta() });
    }
    check_proper(g, &input.colors)?;
    if input.colors.iter().all(|&c| c <= target) {
        return Ok(Outcome::single(
            ProperColoring { palette: target.min(input.palette.max(target)), colors: input.colors.clone() },
            "color-reduction",
            0,
        ));
    }
    let inputs: Vec<(usize, Color)> = input
        .colors
        .iter()
        .map(|&c| (if c <= target { 0 } else { (c - target) as usize }, c))
        .collect();
    let (colors, rounds) = run_sweep(g, inputs, |&own: &Color, taken: &[Color]| {
        if own <= target {
            return Ok(own);
        }
        (1..=target).find(|c| !taken.contains(c)).ok_or_else(|| "no free color".to_string())
    })?;
    Ok(Outcome::single(ProperColoring { palette: target, colors }, "color-reduction", rounds))
}

/// `(degree+1)`-list coloring by sweeping the classes of a helper coloring.
/// Takes at most `helper.palette` rounds.
pub fn list_color_det(
    g: &Graph,
    lists: &ListAssignment,
    helper: &ProperColoring,
) -> Result<Outcome<ProperColoring>, PrimitiveError> {
    for v in 0..g.n() {
        if lists[v].len() <= g.degree(v) {
            return Err(PrimitiveError::ListTooShort { node: v, len: lists[v].len(), degree: g.degree(v) });
        }
    }
    check_proper(g, &helper.colors)?;
    let inputs: Vec<(usize, &Vec<Color>)> =
        (0..g.n()).map(|v| (helper.colors[v] as usize, &lists[v])).collect();
    let (colors, rounds) = run_sweep(g, inputs, |list: &&Vec<Color>, taken: &[Color]| {
        let mut sorted: Vec<Color> = list.to_vec();
        sorted.sort_unstable();
        sorted.into_iter().find(|c| !taken.contains(c)).ok_or_else(|| "list exhausted".to_string())
    })?;
    let palette = lists.iter().flatten().copied().max().unwrap_or(0);
    Ok(Outcome::single(ProperColoring { palette, colors }, "list-sweep", rounds))
}

/// Maximal independent set by sweeping the classes of a proper coloring.
pub fn mis(g: &Graph, precoloring: &ProperColoring) -> Result<Outcome<Vec<bool>>, PrimitiveError> {
    check_proper(g, &precoloring.colors)?;
    let inputs: Vec<(usize, ())> = precoloring.colors.iter().map(|&c| (c as usize, ())).collect();
    let (inside, rounds) = run_sweep(g, inputs, |_: &(), nbrs: &[bool]| Ok(!nbrs.contains(&true)))?;
    Ok(Outcome::single(inside, "mis", rounds))
}

#[derive(Debug, Clone, Copy)]
enum Sloppy {
    Try(Color),
    Fixed(Color),
}

struct SloppyProgram {
    trials: usize,
}

struct SloppyState {
    fixed: Option<Color>,
    tentative: Option<Color>,
    blocked: HashSet<Color>,
}

impl NodeProgram for SloppyProgram {
    type Input = Vec<Color>;
    type State = SloppyState;
    type Msg = Sloppy;
    type Output = Option<Color>;

    fn init(&self, _ctx: &NodeContext<'_, Vec<Color>>) -> SloppyState {
        SloppyState { fixed: None, tentative: None, blocked: HashSet::new() }
    }

    fn step(
        &self,
        ctx: &NodeContext<'_, Vec<Color>>,
        st: &mut SloppyState,
        round: usize,
        inbox: &[Envelope<Sloppy>],
        rng: &mut NodeRng,
    ) -> Result<Action<Sloppy, Option<Color>>, ProgramError> {
        if st.fixed.is_some() {
            return Ok(Action::idle().wake(Wake::OnMessage));
        }
        let mut clash = false;
        for env in inbox {
            match env.msg {
                Sloppy::Fixed(c) => {
                    st.blocked.insert(c);
                    clash |= st.tentative == Some(c);
                }
                Sloppy::Try(c) => clash |= st.tentative == Some(c),
            }
        }
        if let Some(c) = st.tentative.take() {
            if !clash {
                st.fixed = Some(c);
                return Ok(Action::send(Sloppy::Fixed(c)).with_output(Some(c)).wake(Wake::OnMessage));
            }
        }
        if round >= self.trials {
            return Ok(Action::output(None));
        }
        let free: Vec<Color> = ctx.input.iter().copied().filter(|c| !st.blocked.contains(c)).collect();
        match free.choose(rng) {
            Some(&c) => {
                st.tentative = Some(c);
                Ok(Action::send(Sloppy::Try(c)))
            }
            None => Ok(Action::idle()),
        }
    }
}

/// Randomized partial list coloring: one random trial per round for `trials`
/// rounds. Colored nodes are always proper; the rest stay uncolored.
pub fn list_color_sloppy(
    g: &Graph,
    lists: &ListAssignment,
    trials: usize,
    seed: u64,
) -> Result<Outcome<PartialColoring>, PrimitiveError> {
    let run = sim::run(g, &SloppyProgram { trials }, lists, seed, trials)?;
    let colors = run.outputs.iter().map(|o| o.flatten()).collect();
    let palette = lists.iter().flatten().copied().max().unwrap_or(0);
    Ok(Outcome::single(PartialColoring { palette, colors }, "list-sloppy", trials))
}

struct DistanceProgram {
    radius: usize,
    palette: Color,
}

struct DistanceState {
    color: Color,
    seen: BTreeMap<u64, Color>,
    fresh: Vec<(u64, Color)>,
}

impl NodeProgram for DistanceProgram {
    type Input = ();
    type State = DistanceState;
    type Msg = Vec<(u64, Color)>;
    type Output = Option<Color>;

    fn init(&self, _ctx: &NodeContext<'_, ()>) -> DistanceState {
        DistanceState { color: 0, seen: BTreeMap::new(), fresh: Vec::new() }
    }

    fn step(
        &self,
        ctx: &NodeContext<'_, ()>,
        st: &mut DistanceState,
        round: usize,
        inbox: &[Envelope<Self::Msg>],
        rng: &mut NodeRng,
    ) -> Result<Action<Self::Msg, Option<Color>>, ProgramError> {
        if round == 0 {
            st.color = rng.random_range(1..=self.palette);
            st.seen.insert(ctx.id, st.color);
            st.fresh.push((ctx.id, st.color));
        }
        for env in inbox {
            for &(id, c) in &env.msg {
                if let std::collections::btree_map::Entry::Vacant(e) = st.seen.entry(id) {
                    e.insert(c);
                    st.fresh.push((id, c));
                }
            }
        }
        if round >= self.radius {
            let clash = st.seen.iter().any(|(&id, &c)| id != ctx.id && c == st.color);
            return Ok(Action::output(if clash { None } else { Some(st.color) }));
        }
        Ok(Action::send(std::mem::take(&mut st.fresh)))
    }
}

/// Every node samples a color from `1..=palette` and keeps it only if no other
/// node within `radius` hops sampled the same color.
pub fn random_distance_coloring(
    g: &Graph,
    radius: usize,
    palette: Color,
    seed: u64,
) -> Result<Outcome<PartialColoring>, PrimitiveError> {
    if palette == 0 {
        return Err(PrimitiveError::InvalidParameters("palette must be >= 1".into()));
    }
    let run = sim::run(g, &DistanceProgram { radius, palette }, &vec![(); g.n()], seed, radius)?;
    let colors = run.outputs.iter().map(|o| o.flatten()).collect();
    Ok(Outcome::single(PartialColoring { palette, colors }, "random-distance-coloring", radius))
}

/// Digit plan for the ruling-set sweep: `levels` base-`base` digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DigitPlan {
    pub levels: usize,
    pub base: u64,
}

impl DigitPlan {
    pub fn new(palette: u64, levels: usize) -> Self {
        let levels = levels.max(1);
        let base = int_root_ceil(palette.max(2), levels as u32).max(2);
        DigitPlan { levels, base }
    }

    pub fn rounds(&self) -> usize {
        self.levels * self.base as usize
    }

    fn digit(&self, color: u64, level: usize) -> u64 {
        let shift = (self.levels - 1 - level) as u32;
        (color / self.base.pow(shift)) % self.base
    }
}

struct DigitRuling {
    plan: DigitPlan,
}

struct DigitState {
    kept_level: Vec<bool>,
    alive: bool,
}

impl NodeProgram for DigitRuling {
    type Input = u64;
    type State = DigitState;
    type Msg = usize;
    type Output = bool;

    fn init(&self, _ctx: &NodeContext<'_, u64>) -> DigitState {
        DigitState { kept_level: vec![false; self.plan.levels], alive: true }
    }

    fn step(
        &self,
        ctx: &NodeContext<'_, u64>,
        st: &mut DigitState,
        round: usize,
        inbox: &[Envelope<usize>],
        _rng: &mut NodeRng,
    ) -> Result<Action<usize, bool>, ProgramError> {
        for env in inbox {
            st.kept_level[env.msg] = true;
        }
        if !st.alive {
            return Ok(Action::idle().wake(Wake::OnMessage));
        }
        let b = self.plan.base as usize;
        let color = *ctx.input;
        let my_round = |level: usize| level * b + self.plan.digit(color, level) as usize + 1;
        let level = (0..self.plan.levels).find(|&l| my_round(l) >= round);
        let Some(level) = level else {
            return Ok(Action::output(true));
        };
        if my_round(level) != round {
            return Ok(Action::idle().wake(Wake::At(my_round(level))));
        }
        if st.kept_level[level] {
            st.alive = false;
            return Ok(Action::output(false));
        }
        let action = Action::send(level);
        if level + 1 == self.plan.levels {
            return Ok(action.with_output(true));
        }
        Ok(action.wake(Wake::At(my_round(level + 1))))
    }
}

/// `(2, levels)`-ruling set from a proper coloring, `levels * base` rounds.
pub fn ruling_set_from_coloring(
    g: &Graph,
    coloring: &ProperColoring,
    levels: usize,
) -> Result<Outcome<Vec<bool>>, PrimitiveError> {
    check_proper(g, &coloring.colors)?;
    let plan = DigitPlan::new(coloring.palette, levels);
    let inputs: Vec<u64> = coloring.colors.iter().map(|&c| c - 1).collect();
    let run = sim::run(g, &DigitRuling { plan }, &inputs, 0, plan.rounds())?;
    let inside = run.complete_outputs()?;
    Ok(Outcome::single(inside, "digit-ruling", plan.rounds()))
}

/// `(alpha, beta)`-ruling set of `g`, computed as a `(2, ⌊beta/(alpha-1)⌋)`
/// ruling set of the power graph `g^(alpha-1)`. One round there costs
/// `alpha-1` rounds of `g`. `precoloring` must be proper on that power graph.
pub fn ruling_set(
    g: &Graph,
    alpha: usize,
    beta: usize,
    precoloring: Option<&ProperColoring>,
) -> Result<Outcome<Vec<bool>>, PrimitiveError> {
    if alpha < 2 || beta + 1 < alpha {
        return Err(PrimitiveError::InvalidParameters(format!("need alpha >= 2 and beta >= alpha-1, got ({alpha}, {beta})")));
    }
    let stretch = alpha - 1;
    let h = if stretch == 1 { g.clone() } else { g.power(stretch, Metric::Hop)? };
    let mut outcome_ledger = crate::coloring::RoundLedger::default();
    let coloring = match precoloring {
        Some(c) => c.clone(),
        None => {
            let lin = linial_coloring(&h)?;
            outcome_ledger.record("ruling/linial-power", lin.rounds * stretch);
            lin.value
        }
    };
    let inner = ruling_set_from_coloring(&h, &coloring, beta / stretch)?;
    outcome_ledger.record("ruling/digits", inner.rounds * stretch);
    Ok(Outcome::from_ledger(inner.value, outcome_ledger))
}

/// `log*` in base 2: how often `log2` must be applied to get to at most 1.
pub fn log_star(x: f64) -> usize {
    let mut x = x;
    let mut k = 0;
    while x > 1.0 {
        x = x.log2();
        k += 1;
    }
    k
}
