use anyhow::Result;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use fraccolor::approx::{self, ApproxParams, Knowledge};
use fraccolor::coloring::MultiColoring;
use fraccolor::frac::{self, PipelineConfig};
use fraccolor::graph::Graph;
use fraccolor::grid::{self, ConstantTimeConfig};
use fraccolor::sim::derive_seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// `(qΔ : q-1)`-coloring.
    QDelta,
    /// `(qΔ+1 : q)`-coloring with small support.
    SmallSupport,
    /// Randomized partial `(qΔ : q-1)`-coloring with sloppy list coloring.
    Sloppy,
    /// Randomized variant without the log* term.
    Fast,
    /// `(1+ε)`-approximation of the fractional chromatic number.
    Approx,
    /// Same, derandomized over a seed pool.
    ApproxDet,
    /// Grid multicoloring in O(log* n) rounds.
    Grid,
    /// Grid multicoloring in constant time, some nodes left uncolored.
    GridConstant,
}

impl Algorithm {
    pub fn name(self) -> String {
        self.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
    }

    /// Partial algorithms may leave nodes uncolored by design.
    pub fn partial(self) -> bool {
        matches!(self, Algorithm::Sloppy | Algorithm::GridConstant)
    }
}

#[derive(Clone, Debug)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    pub q: usize,
    pub epsilon: f64,
    pub pool: usize,
    pub seed: u64,
    pub round_cap: Option<usize>,
}

pub struct RunOutput {
    pub coloring: MultiColoring,
    pub rounds: usize,
}

pub fn run(g: &Graph, spec: &RunSpec) -> Result<RunOutput> {
    let q = spec.q;
    let cfg = PipelineConfig { seed: spec.seed, ..PipelineConfig::default() };
    let approx_params = || -> Result<ApproxParams> {
        let mut p = ApproxParams::new(spec.epsilon, Knowledge::Unknown)?;
        p.round_cap = spec.round_cap;
        Ok(p)
    };
    let (coloring, rounds) = match spec.algorithm {
        Algorithm::QDelta => {
            let o = frac::q_delta_coloring(g, q, &cfg)?;
            (o.value.coloring, o.rounds)
        }
        Algorithm::SmallSupport => {
            let o = frac::small_support_coloring(g, q, &cfg)?;
            (o.value.coloring, o.rounds)
        }
        Algorithm::Sloppy => {
            let o = frac::q_delta_coloring_sloppy(g, q, spec.seed)?;
            (o.value, o.rounds)
        }
        Algorithm::Fast => {
            let o = frac::fast_no_logstar(g, q, spec.seed)?;
            (o.value, o.rounds)
        }
        Algorithm::Approx => {
            let o = approx::approx_chi_f(g, &approx_params()?, spec.seed)?;
            (o.value.coloring, o.rounds)
        }
        Algorithm::ApproxDet => {
            let pool: Vec<u64> = (0..spec.pool as u64).map(|i| derive_seed(spec.seed, i)).collect();
            let o = approx::approx_chi_f_det(g, &approx_params()?, &pool)?;
            (o.value.coloring, o.rounds)
        }
        Algorithm::Grid => {
            let o = grid::grid_multicolor_logstar(g, q, None)?;
            (o.value.coloring, o.rounds)
        }
        Algorithm::GridConstant => {
            let o = grid::grid_constant_time(g, q, spec.epsilon, spec.seed, &ConstantTimeConfig::default())?;
            (o.value.coloring, o.rounds)
        }
    };
    Ok(RunOutput { coloring, rounds })
}
