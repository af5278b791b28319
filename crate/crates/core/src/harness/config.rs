use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{MixcutError, Result};
use crate::graph::Metric;
use crate::model::{Figure1Params, MixtureModel};
use crate::solvers::{Method, DEFAULT_ENUMERATION_CAP};

/// Where the mixture for each sweep cell comes from. Canned generators are
/// instantiated at every swept `K`; a model file fixes `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum ModelSource {
    File {
        path: PathBuf,
    },
    Figure1 {
        #[serde(flatten)]
        params: Figure1Params,
    },
    Homogeneous {
        p1: f64,
        p2: f64,
    },
}

impl ModelSource {
    pub fn model(&self, k: usize) -> Result<MixtureModel> {
        match self {
            Self::File { path } => {
                let m = MixtureModel::load(path)?;
                if m.k() != k {
                    return Err(MixcutError::InvalidConfig(format!(
                        "model file {} has K = {}, but the sweep asks for K = {k}",
                        path.display(),
                        m.k()
                    )));
                }
                Ok(m)
            }
            Self::Figure1 { params } => MixtureModel::figure1(k, params),
            Self::Homogeneous { p1, p2 } => MixtureModel::homogeneous(k, *p1, *p2),
        }
    }

    /// Resolves a relative file path against `base`.
    fn rebase(&mut self, base: &Path) {
        if let Self::File { path } = self {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
    }
}

fn default_restarts() -> usize {
    8
}

fn default_cap() -> usize {
    DEFAULT_ENUMERATION_CAP
}

fn default_metric() -> Metric {
    Metric::Hamming
}

/// A phase-diagram sweep: every `(N, K)` in `n_list × k_list` is run for
/// `trials` seeded datasets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSource,
    pub n_list: Vec<usize>,
    pub k_list: Vec<usize>,
    pub trials: usize,
    pub method: Method,
    #[serde(default = "default_metric")]
    pub metric: Metric,
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Hill-climb restarts per trial.
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    /// Node-count cap for the exact solver.
    #[serde(default = "default_cap")]
    pub cap: usize,
}

impl ExperimentConfig {
    /// Reads and validates a JSON config. A relative model path is taken
    /// relative to the config file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut cfg: Self = serde_json::from_str(&text)?;
        if let Some(dir) = path.parent() {
            cfg.model.rebase(dir);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(MixcutError::InvalidConfig(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.n_list.is_empty() || self.k_list.is_empty() {
            return bad("n_list and k_list must be non-empty".into());
        }
        if self.n_list.contains(&0) || self.k_list.contains(&0) {
            return bad("every N and K must be positive".into());
        }
        for (name, list) in [("n_list", &self.n_list), ("k_list", &self.k_list)] {
            let mut sorted = list.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != list.len() {
                return bad(format!("{name} contains duplicates"));
            }
        }
        if self.method == Method::HillClimb && self.restarts == 0 {
            return bad("restarts must be at least 1".into());
        }
        if self.method == Method::Exact {
            if let Some(&n) = self.n_list.iter().filter(|&&n| 2 * n > self.cap).max() {
                return Err(MixcutError::AboveEnumerationCap {
                    nodes: 2 * n,
                    cap: self.cap,
                });
            }
        }
        for &k in &self.k_list {
            self.model.model(k)?;
        }
        Ok(())
    }

    /// Sweep cells in `(N, K)` order.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        let mut cells: Vec<_> = self
            .n_list
            .iter()
            .flat_map(|&n| self.k_list.iter().map(move |&k| (n, k)))
            .collect();
        cells.sort_unstable();
        cells
    }
}
