use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cut_state::CutState;
use super::{Method, SolveResult};
use crate::error::{MixcutError, Result};
use crate::graph::{BalancedCut, CutGraph, Objective};
use crate::rng::{derive_seed, row_stream};

/// Which improving 1-swap to accept at each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Improvement {
    #[default]
    Best,
    First,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HillClimbConfig {
    pub restarts: usize,
    pub objective: Objective,
    pub improvement: Improvement,
}

impl Default for HillClimbConfig {
    fn default() -> Self {
        Self {
            restarts: 8,
            objective: Objective::Max,
            improvement: Improvement::Best,
        }
    }
}

/// Max-cut local search with best-improvement 1-swaps.
pub fn solve_hillclimb(graph: &CutGraph, restarts: usize, seed: u64) -> Result<SolveResult> {
    solve_hillclimb_with(
        graph,
        &HillClimbConfig {
            restarts,
            ..Default::default()
        },
        seed,
    )
}

/// Runs `restarts` independent climbs from random balanced cuts. A climb
/// exchanges one node from each side while that strictly improves the
/// objective. Restart `r` draws its start from `derive_seed(seed, [r])`, so
/// the result does not depend on how restarts are scheduled.
pub fn solve_hillclimb_with(
    graph: &CutGraph,
    config: &HillClimbConfig,
    seed: u64,
) -> Result<SolveResult> {
    if config.restarts == 0 {
        return Err(MixcutError::OutOfRange(
            "restarts must be at least 1".into(),
        ));
    }
    let climbs: Vec<Climb> = (0..config.restarts)
        .into_par_iter()
        .map(|r| climb(graph, config, derive_seed(seed, &[r as u64])))
        .collect();

    let mut best_idx = 0;
    for (i, c) in climbs.iter().enumerate().skip(1) {
        if config.objective.better(c.weight, climbs[best_idx].weight) {
            best_idx = i;
        }
    }
    let evaluations = climbs.iter().map(|c| c.evaluations).sum();
    let best = &climbs[best_idx];
    Ok(SolveResult {
        best_cut: BalancedCut::from_membership(best.membership.clone())?,
        best_weight: best.weight,
        method: Method::HillClimb,
        objective: config.objective,
        evaluations,
        tie: false,
        climbs: climbs.into_iter().map(|c| c.trace).collect(),
    })
}

struct Climb {
    membership: Vec<bool>,
    weight: u64,
    trace: Vec<u64>,
    evaluations: u64,
}

fn climb(graph: &CutGraph, config: &HillClimbConfig, seed: u64) -> Climb {
    let n = graph.n_nodes();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut row_stream(seed, 0));
    let mut in_s = vec![false; n];
    for &v in &order[..n / 2] {
        in_s[v] = true;
    }

    let mut state = CutState::new(graph, in_s);
    let mut trace = vec![state.weight()];
    let mut evaluations = 1u64;
    let sign = match config.objective {
        Objective::Max => 1,
        Objective::Min => -1,
    };
    loop {
        let mut chosen: Option<(usize, usize, i64)> = None;
        'scan: for a in (0..n).filter(|&a| state.membership()[a]) {
            for b in (0..n).filter(|&b| !state.membership()[b]) {
                evaluations += 1;
                let gain = sign * state.swap_gain(a, b);
                if gain > 0 && chosen.is_none_or(|(_, _, g)| gain > g) {
                    chosen = Some((a, b, gain));
                    if config.improvement == Improvement::First {
                        break 'scan;
                    }
                }
            }
        }
        match chosen {
            Some((a, b, _)) => {
                state.swap(a, b);
                trace.push(state.weight());
            }
            None => break,
        }
    }
    Climb {
        membership: state.membership().to_vec(),
        weight: state.weight(),
        trace,
        evaluations,
    }
}
