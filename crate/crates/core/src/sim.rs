//! Synchronous LOCAL-model round engine.
//!
//! In round `r` every awake node consumes the messages its neighbors broadcast
//! in round `r - 1`, updates its state, optionally broadcasts a message and
//! optionally produces its (single) output. A node that outputs in round `r`
//! used `r` rounds. Nodes know their own id, degree, the ids of their
//! neighbors, `n` and Δ; nothing else about the topology.
//!
//! Nodes may declare that they will idle until a given round or until the next
//! message arrives. Skipped steps are semantically no-op steps, which lets long
//! fixed schedules (class sweeps, padded phases) run without simulating every
//! empty round.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// Random source handed to node programs. Keyed by `(master_seed, id, round)`.
pub type NodeRng = ChaCha8Rng;

const PARALLEL_THRESHOLD: usize = 2048;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("node {id} failed in round {round}: {msg}")]
    Program { id: u64, round: usize, msg: String },
    #[error("expected {expected} node inputs, got {got}")]
    InputLength { expected: usize, got: usize },
}

/// Failure raised by a node program.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{0}")]
pub struct ProgramError(pub String);

/// Everything a node knows before the first round.
#[derive(Debug)]
pub struct NodeContext<'a, I> {
    pub id: u64,
    pub degree: usize,
    pub neighbor_ids: &'a [u64],
    pub n: usize,
    pub max_degree: usize,
    pub input: &'a I,
}

#[derive(Debug, Clone)]
pub struct Envelope<M> {
    pub from: u64,
    pub msg: M,
}

/// When a node wants to be stepped next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wake {
    NextRound,
    At(usize),
    OnMessage,
}

#[derive(Debug, Clone)]
pub struct Action<M, O> {
    pub send: Option<M>,
    pub output: Option<O>,
    pub wake: Wake,
}

impl<M, O> Action<M, O> {
    pub fn idle() -> Self {
        Action { send: None, output: None, wake: Wake::NextRound }
    }

    pub fn send(msg: M) -> Self {
        Action { send: Some(msg), output: None, wake: Wake::NextRound }
    }

    pub fn output(out: O) -> Self {
        Action { send: None, output: Some(out), wake: Wake::OnMessage }
    }

    pub fn with_send(mut self, msg: M) -> Self {
        self.send = Some(msg);
        self
    }

    pub fn with_output(mut self, out: O) -> Self {
        self.output = Some(out);
        self
    }

    pub fn wake(mut self, wake: Wake) -> Self {
        self.wake = wake;
        self
    }
}

/// A distributed algorithm: per-node state machine.
///
/// Implementations must be pure functions of the context, their own state, the
/// inbox and the supplied random stream. A step with an empty inbox taken
/// while the node asked to sleep must be a no-op.
pub trait NodeProgram: Sync {
    type Input: Sync;
    type State: Send;
    type Msg: Clone + Send + Sync;
    type Output: Clone + Send;

    fn init(&self, ctx: &NodeContext<'_, Self::Input>) -> Self::State;

    fn step(
        &self,
        ctx: &NodeContext<'_, Self::Input>,
        state: &mut Self::State,
        round: usize,
        inbox: &[Envelope<Self::Msg>],
        rng: &mut NodeRng,
    ) -> Result<Action<Self::Msg, Self::Output>, ProgramError>;
}

/// Record of one execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmRun<O> {
    pub seed: u64,
    /// Rounds until the last node produced its output (or the cap).
    pub rounds: usize,
    pub node_rounds: Vec<Option<usize>>,
    pub outputs: Vec<Option<O>>,
}

impl<O: Clone> AlgorithmRun<O> {
    pub fn all_output(&self) -> bool {
        self.outputs.iter().all(Option::is_some)
    }

    /// Outputs of all nodes; fails if the run was truncated.
    pub fn complete_outputs(&self) -> Result<Vec<O>, SimError> {
        self.outputs
            .iter()
            .enumerate()
            .map(|(v, o)| {
                o.clone().ok_or(SimError::Program {
                    id: v as u64,
                    round: self.rounds,
                    msg: "no output before round cap".into(),
                })
            })
            .collect()
    }
}

impl<O: Serialize> AlgorithmRun<O> {
    /// Transcript JSON `{seed, rounds, outputs}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "seed": self.seed,
            "rounds": self.rounds,
            "outputs": self.outputs,
        })
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Derive an independent 64-bit seed from a parent seed and a label.
pub fn derive_seed(parent: u64, label: u64) -> u64 {
    splitmix64(parent ^ splitmix64(label.wrapping_add(0x51_7cc1_b727_220a)))
}

/// Private random stream of node `id` in `round`.
pub fn node_rng(master_seed: u64, id: u64, round: usize) -> NodeRng {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(master_seed, id));
    rng.set_stream(round as u64);
    rng
}

/// Default round cap: `10 n`.
pub fn default_round_cap(g: &Graph) -> usize {
    10 * g.n().max(1)
}

/// Execute `prog` on `g` in lock-step rounds until every node has output or
/// `round_cap` is reached. Nodes without output at the cap are reported as
/// `None`.
pub fn run<P: NodeProgram>(
    g: &Graph,
    prog: &P,
    inputs: &[P::Input],
    master_seed: u64,
    round_cap: usize,
) -> Result<AlgorithmRun<P::Output>, SimError> {
    let n = g.n();
    if inputs.len() != n {
        return Err(SimError::InputLength { expected: n, got: inputs.len() });
    }
    let neighbor_ids: Vec<Vec<u64>> =
        (0..n).map(|v| g.neighbors(v).iter().map(|&w| g.id(w)).collect()).collect();
    let max_degree = g.delta();
    let ctxs: Vec<NodeContext<'_, P::Input>> = (0..n)
        .map(|v| NodeContext {
            id: g.id(v),
            degree: g.degree(v),
            neighbor_ids: &neighbor_ids[v],
            n,
            max_degree,
            input: &inputs[v],
        })
        .collect();
    let mut states: Vec<Option<P::State>> = ctxs.iter().map(|c| Some(prog.init(c))).collect();
    let mut outputs: Vec<Option<P::Output>> = vec![None; n];
    let mut node_rounds: Vec<Option<usize>> = vec![None; n];
    let mut wake: Vec<Wake> = vec![Wake::At(0); n];
    let mut inboxes: Vec<Vec<Envelope<P::Msg>>> = (0..n).map(|_| Vec::new()).collect();
    let mut remaining = n;
    let mut round = 0usize;
    let mut last_round = 0usize;

    while remaining > 0 && round <= round_cap {
        let active: Vec<usize> = (0..n)
            .filter(|&v| {
                !inboxes[v].is_empty()
                    || match wake[v] {
                        Wake::NextRound => true,
                        Wake::At(r) => r <= round,
                        Wake::OnMessage => false,
                    }
            })
            .collect();
        if active.is_empty() {
            // Nothing in flight: jump to the next scheduled wake-up.
            match wake.iter().filter_map(|w| if let Wake::At(r) = w { Some(*r) } else { None }).min() {
                Some(r) if r > round => {
                    round = r;
                    continue;
                }
                _ => break,
            }
        }
        last_round = round;
        let taken: Vec<(usize, P::State, Vec<Envelope<P::Msg>>)> = active
            .iter()
            .map(|&v| (v, states[v].take().expect("state present between rounds"), std::mem::take(&mut inboxes[v])))
            .collect();
        let step_one = |(v, mut state, inbox): (usize, P::State, Vec<Envelope<P::Msg>>)| {
            let ctx = &ctxs[v];
            let mut rng = node_rng(master_seed, ctx.id, round);
            let result = prog.step(ctx, &mut state, round, &inbox, &mut rng);
            (v, state, result)
        };
        let results: Vec<_> = if taken.len() >= PARALLEL_THRESHOLD {
            taken.into_par_iter().map(step_one).collect()
        } else {
            taken.into_iter().map(step_one).collect()
        };
        let mut outgoing: Vec<(usize, P::Msg)> = Vec::new();
        for (v, state, result) in results {
            states[v] = Some(state);
            let action = result.map_err(|e| SimError::Program { id: g.id(v), round, msg: e.0 })?;
            if let Some(out) = action.output {
                if outputs[v].is_none() {
                    outputs[v] = Some(out);
                    node_rounds[v] = Some(round);
                    remaining -= 1;
                }
            }
            wake[v] = match action.wake {
                Wake::NextRound => Wake::At(round + 1),
                other => other,
            };
            if let Some(msg) = action.send {
                outgoing.push((v, msg));
            }
        }
        for (v, msg) in outgoing {
            let from = g.id(v);
            for &w in g.neighbors(v) {
                inboxes[w].push(Envelope { from, msg: msg.clone() });
            }
        }
        round += 1;
    }
    let rounds = if remaining == 0 { node_rounds.iter().flatten().copied().max().unwrap_or(0) } else { last_round.max(round_cap.min(round)) };
    Ok(AlgorithmRun { seed: master_seed, rounds, node_rounds, outputs })
}

/// Labeled radius-r ball as gathered by [`CollectBall`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallView<L> {
    pub center: u64,
    pub radius: usize,
    /// id -> (label, sorted neighbor ids)
    pub nodes: BTreeMap<u64, (L, Vec<u64>)>,
}

impl<L> BallView<L> {
    /// Edges of the induced subgraph on the ball, as id pairs `a < b`.
    pub fn edges(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for (&a, (_, nbrs)) in &self.nodes {
            for &b in nbrs {
                if a < b && self.nodes.contains_key(&b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }
}

/// Gather the exact labeled induced subgraph of the radius-`radius` ball, then
/// output `finish(ball)`.
pub struct CollectBall<L, F> {
    pub radius: usize,
    pub finish: F,
    _label: std::marker::PhantomData<fn() -> L>,
}

impl<L, F> CollectBall<L, F> {
    pub fn new(radius: usize, finish: F) -> Self {
        CollectBall { radius, finish, _label: std::marker::PhantomData }
    }
}

pub struct BallState<L> {
    known: BTreeMap<u64, (L, Vec<u64>)>,
    fresh: Vec<(u64, L, Vec<u64>)>,
}

impl<L, F, O> NodeProgram for CollectBall<L, F>
where
    L: Clone + Send + Sync,
    F: Fn(&BallView<L>) -> O + Sync,
    O: Clone + Send,
{
    type Input = L;
    type State = BallState<L>;
    type Msg = Vec<(u64, L, Vec<u64>)>;
    type Output = O;

    fn init(&self, ctx: &NodeContext<'_, L>) -> BallState<L> {
        let mut nbrs = ctx.neighbor_ids.to_vec();
        nbrs.sort_unstable();
        let me = (ctx.id, ctx.input.clone(), nbrs);
        let mut known = BTreeMap::new();
        known.insert(me.0, (me.1.clone(), me.2.clone()));
        BallState { known, fresh: vec![me] }
    }

    fn step(
        &self,
        ctx: &NodeContext<'_, L>,
        state: &mut BallState<L>,
        round: usize,
        inbox: &[Envelope<Self::Msg>],
        _rng: &mut NodeRng,
    ) -> Result<Action<Self::Msg, O>, ProgramError> {
        for env in inbox {
            for (id, label, nbrs) in &env.msg {
                if !state.known.contains_key(id) {
                    state.known.insert(*id, (label.clone(), nbrs.clone()));
                    state.fresh.push((*id, label.clone(), nbrs.clone()));
                }
            }
        }
        if round == self.radius {
            let view = BallView { center: ctx.id, radius: self.radius, nodes: state.known.clone() };
            return Ok(Action::output((self.finish)(&view)).wake(Wake::OnMessage));
        }
        let fresh = std::mem::take(&mut state.fresh);
        Ok(if fresh.is_empty() { Action::idle() } else { Action::send(fresh) })
    }
}

/// Run [`CollectBall`] and return every node's ball.
pub fn collect_balls<L: Clone + Send + Sync>(
    g: &Graph,
    labels: &[L],
    radius: usize,
) -> Result<Vec<BallView<L>>, SimError> {
    let prog = CollectBall::new(radius, |b: &BallView<L>| b.clone());
    run(g, &prog, labels, 0, radius)?.complete_outputs()
}

/// Per-node locality statistics over several seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub n: usize,
    pub max_rounds: Vec<usize>,
    pub mean_rounds: Vec<f64>,
    pub overall_max: usize,
    pub overall_mean: f64,
}

/// Measure per-node round counts of `prog` over `seeds`. Nodes that never
/// output are counted at the round cap.
pub fn measure_locality<P: NodeProgram>(
    g: &Graph,
    prog: &P,
    inputs: &[P::Input],
    seeds: &[u64],
    round_cap: usize,
) -> Result<LocalityReport, SimError> {
    let n = g.n();
    let mut max_rounds = vec![0usize; n];
    let mut sums = vec![0usize; n];
    for &seed in seeds {
        let run = run(g, prog, inputs, seed, round_cap)?;
        for v in 0..n {
            let r = run.node_rounds[v].unwrap_or(round_cap);
            max_rounds[v] = max_rounds[v].max(r);
            sums[v] += r;
        }
    }
    let k = seeds.len().max(1) as f64;
    let mean_rounds: Vec<f64> = sums.iter().map(|&s| s as f64 / k).collect();
    Ok(LocalityReport {
        n,
        overall_max: max_rounds.iter().copied().max().unwrap_or(0),
        overall_mean: mean_rounds.iter().sum::<f64>() / n.max(1) as f64,
        max_rounds,
        mean_rounds,
    })
}

/// Every node outputs its own identifier without communicating.
pub struct EchoId;

impl NodeProgram for EchoId {
    type Input = ();
    type State = ();
    type Msg = ();
    type Output = u64;

    fn init(&self, _ctx: &NodeContext<'_, ()>) {}

    fn step(
        &self,
        ctx: &NodeContext<'_, ()>,
        _state: &mut (),
        _round: usize,
        _inbox: &[Envelope<()>],
        _rng: &mut NodeRng,
    ) -> Result<Action<(), u64>, ProgramError> {
        Ok(Action::output(ctx.id))
    }
}

/// Flood the maximum identifier for a fixed number of rounds.
pub struct FloodMax {
    pub rounds: usize,
}

impl NodeProgram for FloodMax {
    type Input = ();
    type State = u64;
    type Msg = u64;
    type Output = u64;

    fn init(&self, ctx: &NodeContext<'_, ()>) -> u64 {
        ctx.id
    }

    fn step(
        &self,
        _ctx: &NodeContext<'_, ()>,
        best: &mut u64,
        round: usize,
        inbox: &[Envelope<u64>],
        _rng: &mut NodeRng,
    ) -> Result<Action<u64, u64>, ProgramError> {
        *best = inbox.iter().map(|e| e.msg).fold(*best, u64::max);
        if round >= self.rounds {
            return Ok(Action::output(*best));
        }
        Ok(Action::send(*best))
    }
}
