//! `fraccolor`: build graphs, run the coloring pipelines, verify outputs and
//! run experiment suites.

mod algorithms;
mod generators;
mod suite;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use fraccolor::coloring::MultiColoring;
use fraccolor::graph::Graph;
use fraccolor::oracle;

use crate::algorithms::{Algorithm, RunSpec};
use crate::suite::Row;

#[derive(Parser)]
#[command(name = "fraccolor", version, about = "Fractional graph coloring in a simulated LOCAL model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory; results go to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Upper bound on simulated rounds.
    #[arg(long)]
    round_cap: Option<usize>,
}

#[derive(Args)]
struct GraphSource {
    /// Edge-list file.
    #[arg(long, conflicts_with = "gen")]
    graph: Option<PathBuf>,
    /// Generator, e.g. `regular:n=60,delta=3` or `torus:sides=24x24`.
    #[arg(long)]
    gen: Option<String>,
}

impl GraphSource {
    fn load(&self, seed: u64) -> Result<(String, Graph)> {
        match (&self.graph, &self.gen) {
            (Some(path), _) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let g = Graph::from_edge_list(&text)?.with_random_ids(seed, 2)?;
                Ok((path.display().to_string(), g))
            }
            (None, Some(spec)) => Ok((spec.clone(), generators::build(spec, seed)?)),
            (None, None) => bail!("give either --graph or --gen"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it in edge-list format.
    Gen {
        /// Generator, e.g. `regular:n=60,delta=3`.
        spec: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run one algorithm on one graph and verify the result.
    Run {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_enum)]
        algorithm: Algorithm,
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, default_value_t = 0.2)]
        epsilon: f64,
        /// Seed pool size of the deterministic approximation.
        #[arg(long, default_value_t = 64)]
        pool: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Check a multicoloring file against a graph.
    Verify {
        #[command(flatten)]
        source: GraphSource,
        /// Multicoloring JSON as written by `run`.
        #[arg(long)]
        coloring: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run every cell of a TOML experiment config.
    Suite {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Exact facts about a small graph.
    Oracle {
        #[command(flatten)]
        source: GraphSource,
        /// Also certify the subdivided family with this half path length.
        #[arg(long)]
        lowerbound: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

fn emit(common: &Common, file: &str, body: &str) -> Result<()> {
    match &common.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(file);
            fs::write(&path, body).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn rows_body(rows: &[Row], format: Format) -> Result<String> {
    match format {
        Format::Csv => suite::to_csv(rows),
        Format::Json => Ok(serde_json::to_string_pretty(rows)? + "\n"),
    }
}

fn results_name(format: Format) -> &'static str {
    match format {
        Format::Csv => "results.csv",
        Format::Json => "results.json",
    }
}

fn read_coloring(path: &Path, n: usize) -> Result<MultiColoring> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(MultiColoring::from_json(&value, n)?)
}

fn real_main() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen { spec, common } => {
            let g = generators::build(&spec, common.seed)?;
            emit(&common, "graph.txt", &g.to_edge_list())?;
            Ok(true)
        }
        Command::Run { source, algorithm, q, epsilon, pool, common } => {
            let (name, g) = source.load(common.seed)?;
            let spec = RunSpec { algorithm, q, epsilon, pool, seed: common.seed, round_cap: common.round_cap };
            let (row, coloring) = suite::run_cell(&name, &g, &spec)?;
            if common.out.is_some() {
                emit(&common, "coloring.json", &(serde_json::to_string_pretty(&coloring.to_json())? + "\n"))?;
            }
            emit(&common, results_name(common.format), &rows_body(std::slice::from_ref(&row), common.format)?)?;
            Ok(row.valid)
        }
        Command::Verify { source, coloring, common } => {
            let (_, g) = source.load(common.seed)?;
            let mc = read_coloring(&coloring, g.n())?;
            let report = oracle::check_multicoloring(&g, &mc);
            emit(&common, "report.json", &(serde_json::to_string_pretty(&report)? + "\n"))?;
            Ok(report.valid && report.complete)
        }
        Command::Suite { config, common } => {
            let text = fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let cfg = suite::parse_config(&text).with_context(|| format!("invalid config {}", config.display()))?;
            let rows = suite::run_suite(&cfg, common.seed, common.round_cap)?;
            let ok = rows.iter().all(|r| r.valid);
            emit(&common, results_name(common.format), &rows_body(&rows, common.format)?)?;
            Ok(ok)
        }
        Command::Oracle { source, lowerbound, common } => {
            let (_, g) = source.load(common.seed)?;
            let mut value = serde_json::to_value(oracle::certificate(&g))?;
            if let Some(k) = lowerbound {
                let rep = oracle::certify_lowerbound_family(&g, k)?;
                value["lowerbound"] = serde_json::json!({
                    "k": k,
                    "nodes": rep.nodes,
                    "girth": rep.girth,
                    "independence_number": rep.independence_number,
                    "independence_bound": rep.independence_bound,
                    "chi_f": rep.chi_f.map(|x| x.to_string()),
                    "chi_f_lower": rep.chi_f_lower.to_string(),
                    "margin": rep.margin.to_string(),
                });
            }
            emit(&common, "certificate.json", &(serde_json::to_string_pretty(&value)? + "\n"))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
