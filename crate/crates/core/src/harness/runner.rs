use std::io::{Read, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::format::{format_sig, round_sig};
use crate::error::{MixcutError, Result};
use crate::graph::{BalancedCut, CutGraph, Metric};
use crate::model::{Dataset, MixtureModel};
use crate::rng::derive_seed;
use crate::solvers::{
    solve_exact_with, solve_hillclimb_with, solve_spectral_on, HillClimbConfig, Improvement,
    Method, SolveResult,
};
use crate::theory;

pub const CSV_HEADER: [&str; 12] = [
    "N",
    "K",
    "gamma",
    "method",
    "metric",
    "trials",
    "successes",
    "success_rate",
    "mean_L",
    "required_K_case",
    "required_K_value",
    "seed",
];

/// Environment variable capping the worker count of a sweep.
pub const THREADS_ENV: &str = "MIXCUT_THREADS";

/// Seed of trial `trial` in cell `(n, k)`.
pub fn trial_seed(master: u64, n: usize, k: usize, trial: usize) -> u64 {
    derive_seed(master, &[n as u64, k as u64, trial as u64])
}

/// Outcome of one seeded dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: usize,
    pub k: usize,
    pub gamma: f64,
    pub trial: usize,
    pub seed: u64,
    /// The best cut is the true partition and no other cut ties it.
    pub success: bool,
    /// The exact solver found several optimal cuts.
    pub tie: bool,
    pub best_weight: u64,
    pub truth_weight: u64,
    /// Swapped nodes per side between the best cut and the truth.
    pub l: usize,
    pub wall_time_ms: f64,
}

impl TrialRecord {
    /// Equality ignoring wall time.
    pub fn same_outcome(&self, other: &Self) -> bool {
        Self {
            wall_time_ms: 0.0,
            ..self.clone()
        } == Self {
            wall_time_ms: 0.0,
            ..other.clone()
        }
    }
}

/// Solves one dataset with the configured method. The objective follows the
/// metric: maximum cut on Hamming graphs, minimum cut on score graphs.
pub fn solve_dataset(
    dataset: &Dataset,
    method: Method,
    metric: Metric,
    restarts: usize,
    cap: usize,
    seed: u64,
) -> Result<(CutGraph, SolveResult)> {
    let graph = CutGraph::build(dataset, metric);
    let result = match method {
        Method::Exact => solve_exact_with(&graph, metric.objective(), cap)?,
        Method::HillClimb => solve_hillclimb_with(
            &graph,
            &HillClimbConfig {
                restarts,
                objective: metric.objective(),
                improvement: Improvement::Best,
            },
            derive_seed(seed, &[u64::from(b'h')]),
        )?,
        Method::Spectral => solve_spectral_on(dataset, &graph)?,
    };
    Ok((graph, result))
}

fn run_trial(
    config: &ExperimentConfig,
    model: &MixtureModel,
    n: usize,
    trial: usize,
) -> Result<TrialRecord> {
    let start = Instant::now();
    let k = model.k();
    let seed = trial_seed(config.seed, n, k, trial);
    let dataset = model.sample(n, seed)?;
    let (graph, result) = solve_dataset(
        &dataset,
        config.method,
        config.metric,
        config.restarts,
        config.cap,
        seed,
    )?;
    let truth = BalancedCut::truth(&dataset);
    let l = result.best_cut.swap_count(&truth)?;
    Ok(TrialRecord {
        n,
        k,
        gamma: model.divergence(),
        trial,
        seed,
        success: l == 0 && !result.tie,
        tie: result.tie,
        best_weight: result.best_weight,
        truth_weight: graph.cut_weight(&truth)?,
        l,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Runs every trial of cell `(n, k)`, ordered by trial index.
pub fn run_cell(config: &ExperimentConfig, n: usize, k: usize) -> Result<Vec<TrialRecord>> {
    if config.trials == 0 {
        return Err(MixcutError::InvalidConfig(
            "trials must be at least 1".into(),
        ));
    }
    if config.method == Method::Exact && 2 * n > config.cap {
        return Err(MixcutError::AboveEnumerationCap {
            nodes: 2 * n,
            cap: config.cap,
        });
    }
    let model = config.model.model(k)?;
    (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, &model, n, t))
        .collect()
}

/// Regime reported in the CSV theory columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RequiredCase {
    Case(u8),
    /// Theory does not apply: `γ = 0` or `N < 4`.
    None,
}

/// One aggregated sweep cell, exactly as written to and read from CSV.
/// Floats are stored already rounded to 6 significant digits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub n: usize,
    pub k: usize,
    pub gamma: f64,
    pub method: Method,
    pub metric: Metric,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub mean_l: f64,
    pub required_k_case: RequiredCase,
    /// Threshold of the active regime; infinite when `γ = 0`, absent when
    /// `N < 4`.
    pub required_k_value: Option<f64>,
    pub seed: u64,
}

/// A cell's CSV row plus the tie count, which is not part of the CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CellAggregate {
    pub row: PhaseRow,
    pub ties: usize,
}

pub fn aggregate(config: &ExperimentConfig, records: &[TrialRecord]) -> Result<CellAggregate> {
    let first = records
        .first()
        .ok_or_else(|| MixcutError::InvalidConfig("cell has no trials".into()))?;
    let (n, k, gamma) = (first.n, first.k, first.gamma);
    let trials = records.len();
    let successes = records.iter().filter(|r| r.success).count();
    let ties = records.iter().filter(|r| r.tie).count();
    let total_l: usize = records.iter().map(|r| r.l).sum();
    let (case, value) = if gamma == 0.0 {
        (RequiredCase::None, Some(f64::INFINITY))
    } else if n < 4 {
        (RequiredCase::None, None)
    } else {
        let req = theory::required_k(n, gamma)?;
        let regime = req.regime(k);
        (
            RequiredCase::Case(regime.number()),
            Some(req.threshold(regime)),
        )
    };
    Ok(CellAggregate {
        row: PhaseRow {
            n,
            k,
            gamma: round_sig(gamma, 6),
            method: config.method,
            metric: config.metric,
            trials,
            successes,
            success_rate: round_sig(successes as f64 / trials as f64, 6),
            mean_l: round_sig(total_l as f64 / trials as f64, 6),
            required_k_case: case,
            required_k_value: value.map(|v| round_sig(v, 6)),
            seed: config.seed,
        },
        ties,
    })
}

/// Worker count: `threads` if given, else `MIXCUT_THREADS`, else rayon's
/// default.
pub fn worker_count(threads: Option<usize>) -> Option<usize> {
    threads.or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&t: &usize| t > 0)
    })
}

/// Runs the sweep and returns one aggregate per cell in `(N, K)` order.
/// The result does not depend on `threads`.
pub fn run_sweep(config: &ExperimentConfig, threads: Option<usize>) -> Result<Vec<CellAggregate>> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = worker_count(threads) {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| MixcutError::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| {
        config
            .cells()
            .into_par_iter()
            .map(|(n, k)| aggregate(config, &run_cell(config, n, k)?))
            .collect()
    })
}

/// Runs the sweep and writes its CSV to `config.output` (or `output` when
/// given). Returns the aggregates.
pub fn phase_diagram(
    config: &ExperimentConfig,
    output: Option<&Path>,
    threads: Option<usize>,
) -> Result<Vec<CellAggregate>> {
    let path = output
        .or(config.output.as_deref())
        .ok_or_else(|| MixcutError::InvalidConfig("no output path".into()))?;
    let cells = run_sweep(config, threads)?;
    let rows: Vec<PhaseRow> = cells.iter().map(|c| c.row.clone()).collect();
    let file = std::fs::File::create(path)?;
    write_csv(std::io::BufWriter::new(file), &rows)?;
    Ok(cells)
}

fn case_field(c: RequiredCase) -> String {
    match c {
        RequiredCase::Case(n) => n.to_string(),
        RequiredCase::None => "none".into(),
    }
}

pub fn write_csv<W: Write>(writer: W, rows: &[PhaseRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.k.to_string(),
            format_sig(r.gamma, 6),
            r.method.name().to_string(),
            r.metric.name().to_string(),
            r.trials.to_string(),
            r.successes.to_string(),
            format_sig(r.success_rate, 6),
            format_sig(r.mean_l, 6),
            case_field(r.required_k_case),
            r.required_k_value
                .map_or("none".into(), |v| format_sig(v, 6)),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(reader: R) -> Result<Vec<PhaseRow>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(String::from).collect();
    if header != CSV_HEADER {
        return Err(MixcutError::InvalidConfig(format!(
            "unexpected CSV header {header:?}"
        )));
    }
    let bad = |what: &str, v: &str| MixcutError::InvalidConfig(format!("bad {what} field {v:?}"));
    let int = |v: &str, what: &str| v.parse::<u64>().map_err(|_| bad(what, v));
    let float = |v: &str, what: &str| v.parse::<f64>().map_err(|_| bad(what, v));
    r.records()
        .map(|rec| {
            let rec = rec?;
            let f = |i: usize| rec.get(i).unwrap_or("");
            Ok(PhaseRow {
                n: int(f(0), "N")? as usize,
                k: int(f(1), "K")? as usize,
                gamma: float(f(2), "gamma")?,
                method: f(3).parse()?,
                metric: f(4).parse()?,
                trials: int(f(5), "trials")? as usize,
                successes: int(f(6), "successes")? as usize,
                success_rate: float(f(7), "success_rate")?,
                mean_l: float(f(8), "mean_L")?,
                required_k_case: match f(9) {
                    "none" => RequiredCase::None,
                    v => RequiredCase::Case(v.parse().map_err(|_| bad("required_K_case", v))?),
                },
                required_k_value: match f(10) {
                    "none" => None,
                    v => Some(float(v, "required_K_value")?),
                },
                seed: int(f(11), "seed")?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::ModelSource;

    fn config(method: Method) -> ExperimentConfig {
        ExperimentConfig {
            model: ModelSource::Homogeneous { p1: 0.8, p2: 0.2 },
            n_list: vec![4, 2],
            k_list: vec![30, 5],
            trials: 6,
            method,
            metric: Metric::Hamming,
            seed: 17,
            output: None,
            restarts: 3,
            cap: 24,
        }
    }

    #[test]
    fn deterministic_model_always_succeeds() {
        let mut c = config(Method::Exact);
        c.model = ModelSource::Homogeneous { p1: 1.0, p2: 0.0 };
        for metric in [Metric::Hamming, Metric::Score] {
            c.metric = metric;
            for method in [Method::Exact, Method::HillClimb, Method::Spectral] {
                c.method = method;
                let recs = run_cell(&c, 3, 4).unwrap();
                assert_eq!(recs.len(), 6);
                assert!(
                    recs.iter().all(|r| r.success && r.l == 0),
                    "{method} {metric}"
                );
                assert!(recs.iter().all(|r| r.best_weight == r.truth_weight));
            }
        }
    }

    #[test]
    fn cells_are_deterministic_and_ordered() {
        for method in [Method::Exact, Method::HillClimb, Method::Spectral] {
            let c = config(method);
            let a = run_cell(&c, 4, 30).unwrap();
            let b = run_cell(&c, 4, 30).unwrap();
            assert!(a.iter().zip(&b).all(|(x, y)| x.same_outcome(y)));
            assert_eq!(
                a.iter().map(|r| r.trial).collect::<Vec<_>>(),
                (0..6).collect::<Vec<_>>()
            );
            for r in &a {
                assert_eq!(r.seed, trial_seed(17, 4, 30, r.trial));
            }
        }
    }

    #[test]
    fn exact_hamming_dominates_truth() {
        let mut c = config(Method::Exact);
        c.model = ModelSource::Homogeneous { p1: 0.6, p2: 0.4 };
        c.trials = 40;
        for r in run_cell(&c, 4, 10).unwrap() {
            assert!(r.best_weight >= r.truth_weight);
            if r.success {
                assert_eq!(r.best_weight, r.truth_weight);
            }
            if r.best_weight == r.truth_weight && !r.success {
                assert!(r.tie);
            }
            assert_eq!(r.success, r.l == 0 && !r.tie);
        }
    }

    #[test]
    fn cap_is_enforced_per_cell() {
        let c = config(Method::Exact);
        assert!(matches!(
            run_cell(&c, 13, 5),
            Err(MixcutError::AboveEnumerationCap { .. })
        ));
    }

    #[test]
    fn csv_round_trip_and_layout() {
        let cells = run_sweep(&config(Method::Exact), Some(2)).unwrap();
        let rows: Vec<PhaseRow> = cells.into_iter().map(|c| c.row).collect();
        assert_eq!(
            rows.iter().map(|r| (r.n, r.k)).collect::<Vec<_>>(),
            vec![(2, 5), (2, 30), (4, 5), (4, 30)]
        );
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(
            "N,K,gamma,method,metric,trials,successes,success_rate,mean_L,required_K_case,required_K_value,seed\n"
        ));
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().count(), 5);
        assert_eq!(read_csv(&buf[..]).unwrap(), rows);
        // N = 2 is below the theory's range.
        assert_eq!(rows[0].required_k_case, RequiredCase::None);
        assert_eq!(rows[0].required_k_value, None);
        assert!(matches!(rows[2].required_k_case, RequiredCase::Case(_)));
    }

    #[test]
    fn zero_divergence_cells_carry_infinite_threshold() {
        let mut c = config(Method::Exact);
        c.model = ModelSource::Homogeneous { p1: 0.5, p2: 0.5 };
        c.n_list = vec![4];
        c.k_list = vec![5];
        let cells = run_sweep(&c, Some(1)).unwrap();
        let row = &cells[0].row;
        assert_eq!(row.required_k_case, RequiredCase::None);
        assert_eq!(row.required_k_value, Some(f64::INFINITY));
        let mut buf = Vec::new();
        write_csv(&mut buf, std::slice::from_ref(row)).unwrap();
        assert!(String::from_utf8(buf.clone())
            .unwrap()
            .contains(",none,inf,"));
        assert_eq!(read_csv(&buf[..]).unwrap(), vec![row.clone()]);
    }
}
