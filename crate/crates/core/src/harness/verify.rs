use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{MixcutError, Result};
use crate::graph::{diff_node, BalancedCut, CutGraph, Metric};
use crate::model::{Component, MixtureModel};
use crate::rng::derive_seed;
use crate::theory;

/// Sample sizes for [`verify_concentration`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    /// Nodes per component for the cut-level checks.
    pub n: usize,
    pub seed: u64,
    /// Pairs `(X, Y)` for the mean-advantage check.
    pub pairs: usize,
    /// Resampled datasets per `L` for the cut-advantage check.
    pub datasets: usize,
    /// Swap counts for the cut-advantage check; values above `N` are skipped.
    pub l_grid: Vec<usize>,
    /// Draws for the bad-node check.
    pub draws: usize,
    pub tau: f64,
    /// Swap count and draws for the per-dimension deviation checks.
    pub deviation_l: usize,
    pub deviation_draws: usize,
    pub t_grid: Vec<f64>,
    /// Multiplier on the order-only budget for the simultaneous-deviation
    /// check.
    pub safety_factor: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n: 4,
            seed: 0,
            pairs: 100_000,
            datasets: 10_000,
            l_grid: vec![1, 2],
            draws: 100_000,
            tau: 0.01,
            deviation_l: 2,
            deviation_draws: 20_000,
            t_grid: vec![0.0, 0.5, 1.0, 1.5, 2.0],
            safety_factor: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The check's precondition does not hold; reported without a verdict.
    HypothesisUnmet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub check: String,
    pub statistic: String,
    /// Theoretical target or bound.
    pub target: f64,
    pub empirical: f64,
    /// Allowed slack (for example three standard errors).
    pub tolerance: f64,
    pub samples: usize,
    pub status: CheckStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub k: usize,
    pub gamma: f64,
    pub n: usize,
    pub rows: Vec<CheckRow>,
}

impl VerifyReport {
    /// No row failed.
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status != CheckStatus::Fail)
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut s = format!("K = {}  gamma = {}  N = {}\n", self.k, self.gamma, self.n);
        let _ = writeln!(
            s,
            "{:<12} {:<34} {:>14} {:>14} {:>12} {:>8}  status",
            "check", "statistic", "target", "empirical", "tolerance", "samples"
        );
        for r in &self.rows {
            let status = match r.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::HypothesisUnmet => "hypothesis unmet",
            };
            let _ = writeln!(
                s,
                "{:<12} {:<34} {:>14.6} {:>14.6} {:>12.6} {:>8}  {status}",
                r.check, r.statistic, r.target, r.empirical, r.tolerance, r.samples
            );
        }
        s
    }
}

/// Mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn within(mean: f64, target: f64, se: f64) -> (f64, CheckStatus) {
    let tol = (3.0 * se).max(1e-9 * target.abs().max(1.0));
    let status = if (mean - target).abs() <= tol {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    (tol, status)
}

const FM99: u64 = 1;
const ADV_MAX: u64 = 2;
const BAD_NODE: u64 = 3;
const DEVIATION: u64 = 4;

/// `diff(X) + diff(Y)` per pair; its mean targets `Kγ`.
pub fn pair_advantages(model: &MixtureModel, pairs: usize, seed: u64) -> Vec<f64> {
    (0..pairs)
        .into_par_iter()
        .map(|i| {
            let s = derive_seed(seed, &[FM99, i as u64]);
            let x = model.draw(Component::One, s, 0);
            let y = model.draw(Component::Two, s, 1);
            diff_node(&x, model, Component::One).expect("model width")
                + diff_node(&y, model, Component::Two).expect("model width")
        })
        .collect()
}

/// Score-cut advantage of a cut exchanging the first `l` nodes of each
/// component, over `datasets` resampled datasets; its mean targets
/// `(N−L)LKγ`.
pub fn cut_advantages(
    model: &MixtureModel,
    n: usize,
    l: usize,
    datasets: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if l > n {
        return Err(MixcutError::OutOfRange(format!("L = {l} exceeds N = {n}")));
    }
    let side: Vec<usize> = (l..n).chain(n..n + l).collect();
    (0..datasets)
        .into_par_iter()
        .map(|i| {
            let d = model.sample(n, derive_seed(seed, &[ADV_MAX, l as u64, i as u64]))?;
            let g = CutGraph::build(&d, Metric::Score);
            let truth = BalancedCut::truth(&d);
            let other = if l == n {
                truth.clone()
            } else {
                BalancedCut::from_side(2 * n, &side)?
            };
            Ok(g.diff_cut(&truth, &other)? as f64)
        })
        .collect()
}

/// Fraction of `draws` points, alternating between components, that are
/// bad nodes.
pub fn bad_node_frequency(model: &MixtureModel, draws: usize, seed: u64) -> f64 {
    let bad = (0..draws)
        .into_par_iter()
        .filter(|&i| {
            let origin = if i % 2 == 0 {
                Component::One
            } else {
                Component::Two
            };
            let z = model.draw(origin, derive_seed(seed, &[BAD_NODE, i as u64]), 0);
            theory::is_bad_node(&z, model, origin).expect("model width")
        })
        .count();
    bad as f64 / draws as f64
}

/// Normalized per-dimension deviations `tₖ = (f₂ᵏ − L(p1ᵏ − p2ᵏ))/√L` for
/// `L` fresh points of each component, one vector of length `K` per draw.
pub fn deviation_draws(model: &MixtureModel, l: usize, draws: usize, seed: u64) -> Vec<Vec<f64>> {
    let sqrt_l = (l as f64).sqrt();
    (0..draws)
        .into_par_iter()
        .map(|i| {
            let s = derive_seed(seed, &[DEVIATION, i as u64]);
            let mut f = vec![0i64; model.k()];
            for j in 0..l as u64 {
                let u = model.draw(Component::One, s, 2 * j);
                let v = model.draw(Component::Two, s, 2 * j + 1);
                for (k, fk) in f.iter_mut().enumerate() {
                    *fk += u.get(k) as i64 - v.get(k) as i64;
                }
            }
            f.iter()
                .enumerate()
                .map(|(k, &fk)| (fk as f64 - l as f64 * (model.p1()[k] - model.p2()[k])) / sqrt_l)
                .collect()
        })
        .collect()
}

/// Runs the five concentration checks. Statistical rows pass within three
/// standard errors; the simultaneous-deviation row passes when its
/// frequency is at most `safety_factor` times the explicit stand-in budget.
pub fn verify_concentration(model: &MixtureModel, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let gamma = model.divergence();
    if gamma == 0.0 {
        return Err(MixcutError::ZeroDivergence);
    }
    if cfg.n == 0 || cfg.pairs < 2 || cfg.datasets < 2 || cfg.draws == 0 || cfg.deviation_draws == 0
    {
        return Err(MixcutError::InvalidConfig(
            "N and every sample count must be positive (pairs and datasets at least 2)".into(),
        ));
    }
    if cfg.deviation_l == 0 || cfg.deviation_l > cfg.n {
        return Err(MixcutError::InvalidConfig(format!(
            "deviation_l must lie in [1, N], got {}",
            cfg.deviation_l
        )));
    }
    let k = model.k();
    let kg = model.squared_distance();
    let mut rows = Vec::new();

    let (mean, se) = mean_se(&pair_advantages(model, cfg.pairs, cfg.seed));
    let (tol, status) = within(mean, kg, se);
    rows.push(CheckRow {
        check: "fm99".into(),
        statistic: "mean diff(X)+diff(Y) vs K*gamma".into(),
        target: kg,
        empirical: mean,
        tolerance: tol,
        samples: cfg.pairs,
        status,
    });

    let n = cfg.n;
    for &l in cfg.l_grid.iter().filter(|&&l| l >= 1 && l <= n) {
        let (mean, se) = mean_se(&cut_advantages(model, n, l, cfg.datasets, cfg.seed)?);
        let target = ((n - l) * l) as f64 * kg;
        let (tol, status) = within(mean, target, se);
        rows.push(CheckRow {
            check: "adv_max".into(),
            statistic: format!("mean diff_cut, L={l} vs (N-L)L*K*gamma"),
            target,
            empirical: mean,
            tolerance: tol,
            samples: cfg.datasets,
            status,
        });
    }

    let freq = bad_node_frequency(model, cfg.draws, cfg.seed);
    let tau = cfg.tau;
    let tol = 3.0 * (tau * (1.0 - tau) / cfg.draws as f64).sqrt();
    let hypothesis = (tau > 0.0 && tau < 1.0) && k >= theory::bad_node_min_k(tau, gamma)?;
    rows.push(CheckRow {
        check: "bad_node".into(),
        statistic: "bad-node frequency vs tau".into(),
        target: tau,
        empirical: freq,
        tolerance: tol,
        samples: cfg.draws,
        status: if !hypothesis {
            CheckStatus::HypothesisUnmet
        } else if freq <= tau + tol {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
    });

    let devs = deviation_draws(model, cfg.deviation_l, cfg.deviation_draws, cfg.seed);
    let cells = (cfg.deviation_draws * k) as f64;
    for &t in &cfg.t_grid {
        let hits = devs.iter().flatten().filter(|x| x.abs() >= t).count();
        let freq = hits as f64 / cells;
        let bound = theory::relaxed_dimension_tail(t);
        let p = bound.min(1.0);
        let tol = 3.0 * (p * (1.0 - p) / cells).sqrt();
        rows.push(CheckRow {
            check: "deviation".into(),
            statistic: format!("P(|t_k| >= {t}) vs 2exp(-t^2), L={}", cfg.deviation_l),
            target: bound,
            empirical: freq,
            tolerance: tol,
            samples: cfg.deviation_draws * k,
            status: if freq <= bound + tol {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
        });
    }

    if n >= 4 {
        let delta = theory::delta(n, k)?;
        let hits = devs
            .iter()
            .filter(|row| row.iter().map(|t| t * t).sum::<f64>() >= delta)
            .count();
        let freq = hits as f64 / cfg.deviation_draws as f64;
        let budget = cfg.safety_factor
            * (-2.0 * n as f64 * std::f64::consts::LN_2 - 1.5 * (n as f64).ln()).exp();
        rows.push(CheckRow {
            check: "delta_event".into(),
            statistic: format!("P(sum t_k^2 >= Delta), L={}", cfg.deviation_l),
            target: budget,
            empirical: freq,
            tolerance: 0.0,
            samples: cfg.deviation_draws,
            status: if freq <= budget {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
        });
    } else {
        rows.push(CheckRow {
            check: "delta_event".into(),
            statistic: "P(sum t_k^2 >= Delta) needs N >= 4".into(),
            target: f64::NAN,
            empirical: f64::NAN,
            tolerance: 0.0,
            samples: 0,
            status: CheckStatus::HypothesisUnmet,
        });
    }

    Ok(VerifyReport { k, gamma, n, rows })
}
