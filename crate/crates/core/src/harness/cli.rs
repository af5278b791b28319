use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::ExperimentConfig;
use super::runner::{phase_diagram, solve_dataset};
use super::verify::{verify_concentration, VerifyConfig};
use crate::error::{MixcutError, Result};
use crate::graph::{BalancedCut, Metric};
use crate::model::{Figure1Params, MixtureModel};
use crate::solvers::{Method, DEFAULT_ENUMERATION_CAP};
use crate::theory;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_REFUSED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "mixcut",
    version,
    about = "Balanced max-cut clustering of Boolean mixtures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a model file.
    Gen(GenArgs),
    /// Sample one dataset and solve it.
    Solve(SolveArgs),
    /// Run a phase-diagram sweep and write its CSV.
    Phase(PhaseArgs),
    /// Print the theoretical bounds at (N, K, gamma).
    Bounds(BoundsArgs),
    /// Run the concentration checks on a model.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Model JSON file.
    #[arg(long, conflicts_with_all = ["figure1", "p1", "p2"])]
    model: Option<PathBuf>,
    /// Use the canned biased mixture (needs --k).
    #[arg(long)]
    figure1: bool,
    /// Homogeneous center of component one (needs --p2 and --k).
    #[arg(long, requires = "p2", conflicts_with = "figure1")]
    p1: Option<f64>,
    #[arg(long, requires = "p1")]
    p2: Option<f64>,
    /// Dimension for canned models.
    #[arg(long)]
    k: Option<usize>,
}

impl ModelArgs {
    fn load(&self) -> Result<MixtureModel> {
        let need_k = || {
            self.k.ok_or_else(|| {
                MixcutError::InvalidConfig("--k is required for canned models".into())
            })
        };
        if let Some(path) = &self.model {
            let m = MixtureModel::load(path)?;
            if let Some(k) = self.k {
                if k != m.k() {
                    return Err(MixcutError::InvalidConfig(format!(
                        "--k {k} disagrees with the model file's K = {}",
                        m.k()
                    )));
                }
            }
            Ok(m)
        } else if self.figure1 {
            MixtureModel::figure1(need_k()?, &Figure1Params::default())
        } else if let (Some(p1), Some(p2)) = (self.p1, self.p2) {
            MixtureModel::homogeneous(need_k()?, p1, p2)
        } else {
            Err(MixcutError::InvalidConfig(
                "give --model, --figure1 or --p1/--p2".into(),
            ))
        }
    }
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Nodes per component.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "exact")]
    method: Method,
    #[arg(long, default_value = "hamming")]
    metric: Metric,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: usize,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct PhaseArgs {
    /// Sweep config JSON.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's output path.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads; defaults to MIXCUT_THREADS or the core count.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Sample sizes as JSON; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    datasets: Option<usize>,
    #[arg(long)]
    draws: Option<usize>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    json: bool,
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code: 0 on success, 1 on usage or I/O errors,
/// 2 when an input is refused (validation, caps, zero divergence) or a
/// verification check fails.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_validation() {
                EXIT_REFUSED
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Gen(a) => {
            let m = a.model.load()?;
            match a.out {
                Some(path) => m.save(path)?,
                None => writeln!(out, "{}", m.to_json()?)?,
            }
        }
        Command::Solve(a) => {
            let model = a.model.load()?;
            if a.method == Method::Exact && 2 * a.n > a.cap {
                return Err(MixcutError::AboveEnumerationCap {
                    nodes: 2 * a.n,
                    cap: a.cap,
                });
            }
            let dataset = model.sample(a.n, a.seed)?;
            let (graph, result) =
                solve_dataset(&dataset, a.method, a.metric, a.restarts, a.cap, a.seed)?;
            let truth = BalancedCut::truth(&dataset);
            let l = result.best_cut.swap_count(&truth)?;
            let success = l == 0 && !result.tie;
            let truth_weight = graph.cut_weight(&truth)?;
            if a.json {
                let v = serde_json::json!({
                    "method": a.method.name(),
                    "metric": a.metric.name(),
                    "n": a.n,
                    "k": model.k(),
                    "gamma": model.divergence(),
                    "seed": a.seed,
                    "success": success,
                    "tie": result.tie,
                    "L": l,
                    "best_weight": result.best_weight,
                    "truth_weight": truth_weight,
                    "side_s": result.best_cut.side_s(),
                    "evaluations": result.evaluations,
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
            } else {
                writeln!(out, "method={} metric={}", a.method, a.metric)?;
                writeln!(
                    out,
                    "N={} K={} gamma={} seed={}",
                    a.n,
                    model.k(),
                    model.divergence(),
                    a.seed
                )?;
                writeln!(
                    out,
                    "best_weight={} truth_weight={}",
                    result.best_weight, truth_weight
                )?;
                writeln!(out, "side_s={:?}", result.best_cut.side_s())?;
                writeln!(out, "L={l} tie={}", result.tie)?;
                writeln!(out, "success={success}")?;
            }
        }
        Command::Phase(a) => {
            let cfg = ExperimentConfig::load(&a.config)?;
            let cells = phase_diagram(&cfg, a.output.as_deref(), a.threads)?;
            let ties: usize = cells.iter().map(|c| c.ties).sum();
            writeln!(out, "wrote {} cells ({ties} tied trials)", cells.len())?;
        }
        Command::Bounds(a) => {
            let rep = theory::failure_budget(a.n, a.k, a.gamma)?;
            if a.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&rep)?)?;
            } else {
                write!(out, "{}", rep.to_text())?;
            }
        }
        Command::Verify(a) => {
            let model = a.model.load()?;
            let mut cfg = match &a.config {
                Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
                None => VerifyConfig::default(),
            };
            if let Some(v) = a.n {
                cfg.n = v;
            }
            if let Some(v) = a.seed {
                cfg.seed = v;
            }
            if let Some(v) = a.pairs {
                cfg.pairs = v;
            }
            if let Some(v) = a.datasets {
                cfg.datasets = v;
            }
            if let Some(v) = a.draws {
                cfg.draws = v;
            }
            if let Some(v) = a.tau {
                cfg.tau = v;
            }
            let rep = verify_concentration(&model, &cfg)?;
            if a.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&rep)?)?;
            } else {
                write!(out, "{}", rep.to_text())?;
            }
            if !rep.passed() {
                return Ok(EXIT_REFUSED);
            }
        }
    }
    Ok(EXIT_OK)
}
