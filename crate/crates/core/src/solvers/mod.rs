//! Balanced-cut solvers.
//!
//! [`solve_exact`] enumerates every balanced cut and is the reference for
//! instances up to [`DEFAULT_ENUMERATION_CAP`] nodes. [`solve_hillclimb`]
//! and [`solve_spectral`] scale further but carry no optimality guarantee.

mod cut_state;
mod exact;
mod hillclimb;
mod spectral;

use serde::{Deserialize, Serialize};

use crate::error::{MixcutError, Result};
use crate::graph::{BalancedCut, Objective};
use crate::model::Dataset;

pub use exact::{solve_exact, solve_exact_with, DEFAULT_ENUMERATION_CAP};
pub use hillclimb::{solve_hillclimb, solve_hillclimb_with, HillClimbConfig, Improvement};
pub use spectral::{solve_spectral, solve_spectral_on};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    #[serde(alias = "hill_climb", alias = "hill-climb")]
    HillClimb,
    Spectral,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::HillClimb => "hillclimb",
            Self::Spectral => "spectral",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = MixcutError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Self::Exact),
            "hillclimb" | "hill_climb" | "hill-climb" => Ok(Self::HillClimb),
            "spectral" => Ok(Self::Spectral),
            other => Err(MixcutError::InvalidConfig(format!(
                "unknown method {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub best_cut: BalancedCut,
    /// Exactly `cut_weight(graph, best_cut)`.
    pub best_weight: u64,
    pub method: Method,
    pub objective: Objective,
    /// Number of full or incremental cut-weight evaluations performed.
    pub evaluations: u64,
    /// Set by the exact solver when two or more cuts attain the optimum.
    pub tie: bool,
    /// Hill climbing only: the weight after every accepted move, one
    /// sequence per restart, each starting at the random initial cut.
    pub climbs: Vec<Vec<u64>>,
}

/// True iff the solver recovered the label-induced bipartition.
pub fn evaluate(result: &SolveResult, dataset: &Dataset) -> Result<bool> {
    if result.best_cut.n_nodes() != dataset.n_nodes() {
        return Err(MixcutError::NodeSetMismatch {
            cut: result.best_cut.n_nodes(),
            graph: dataset.n_nodes(),
        });
    }
    Ok(result.best_cut == BalancedCut::truth(dataset))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{CutGraph, Metric};
    use crate::model::MixtureModel;

    #[test]
    fn evaluate_is_unordered() {
        let d = MixtureModel::homogeneous(3, 1.0, 0.0)
            .unwrap()
            .sample(2, 1)
            .unwrap();
        let g = CutGraph::build(&d, Metric::Hamming);
        let r = solve_exact(&g).unwrap();
        assert!(evaluate(&r, &d).unwrap());

        let mut reversed = r.clone();
        reversed.best_cut = BalancedCut::from_side(4, &[2, 3]).unwrap();
        assert!(evaluate(&reversed, &d).unwrap());

        let mut wrong = r.clone();
        wrong.best_cut = BalancedCut::from_side(4, &[0, 2]).unwrap();
        assert!(!evaluate(&wrong, &d).unwrap());

        let mut bad = r;
        bad.best_cut = BalancedCut::from_side(6, &[0, 1, 2]).unwrap();
        assert!(evaluate(&bad, &d).is_err());
    }

    #[test]
    fn method_parsing() {
        assert_eq!("exact".parse::<Method>().unwrap(), Method::Exact);
        assert_eq!("hill-climb".parse::<Method>().unwrap(), Method::HillClimb);
        assert!("sdp".parse::<Method>().is_err());
    }
}
