use rayon::prelude::*;

use super::cut_state::CutState;
use super::{Method, SolveResult};
use crate::error::{MixcutError, Result};
use crate::graph::{BalancedCut, CutGraph, Objective};

/// Largest node count the exact solver accepts by default
/// (C(23, 11) ≈ 1.35M canonical cuts).
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

const CHUNK: u64 = 4096;

/// Maximum-weight balanced cut by full enumeration.
pub fn solve_exact(graph: &CutGraph) -> Result<SolveResult> {
    solve_exact_with(graph, Objective::Max, DEFAULT_ENUMERATION_CAP)
}

/// Enumerates every canonical balanced cut: node 0 joined with each
/// `(N−1)`-subset of `{1, …, 2N−1}` in lexicographic order. Among optimal
/// cuts the first in that order wins, and `tie` is set when there are
/// several. Chunks of the order run in parallel; the merge keeps the
/// earliest chunk on equal weight, so the answer matches a sequential scan.
pub fn solve_exact_with(graph: &CutGraph, objective: Objective, cap: usize) -> Result<SolveResult> {
    let n = graph.n_nodes();
    if n > cap {
        return Err(MixcutError::AboveEnumerationCap { nodes: n, cap });
    }
    let m = n - 1;
    let r = graph.half() - 1;
    let total = binomial(m as u64, r as u64);
    let n_chunks = total.div_ceil(CHUNK);

    let best = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let len = CHUNK.min(total - start);
            scan_chunk(graph, objective, m, r, start, len)
        })
        .reduce_with(|a, b| merge(objective, a, b))
        .expect("at least one canonical cut exists");

    let best_cut = BalancedCut::from_membership(best.membership)?;
    Ok(SolveResult {
        best_cut,
        best_weight: best.weight,
        method: Method::Exact,
        objective,
        evaluations: total,
        tie: best.count > 1,
        climbs: Vec::new(),
    })
}

struct ChunkBest {
    weight: u64,
    membership: Vec<bool>,
    count: u64,
}

fn merge(objective: Objective, a: ChunkBest, b: ChunkBest) -> ChunkBest {
    // `a` always covers an earlier range than `b`.
    if objective.better(b.weight, a.weight) {
        b
    } else if b.weight == a.weight {
        ChunkBest {
            count: a.count + b.count,
            ..a
        }
    } else {
        a
    }
}

fn scan_chunk(
    graph: &CutGraph,
    objective: Objective,
    m: usize,
    r: usize,
    start: u64,
    len: u64,
) -> ChunkBest {
    let mut combo = unrank(m, r, start);
    let mut membership = vec![false; m + 1];
    membership[0] = true;
    for &c in &combo {
        membership[c + 1] = true;
    }
    let mut state = CutState::new(graph, membership);
    let mut best = ChunkBest {
        weight: state.weight(),
        membership: state.membership().to_vec(),
        count: 1,
    };
    let mut prev = combo.clone();
    for _ in 1..len {
        let pivot = advance(&mut combo, m).expect("chunk length stays within the enumeration");
        // Positions `pivot..` changed: drop nodes that left, then add arrivals.
        for &c in prev[pivot..].iter().filter(|c| !combo[pivot..].contains(c)) {
            state.toggle(c + 1);
        }
        for &c in combo[pivot..].iter().filter(|c| !prev[pivot..].contains(c)) {
            state.toggle(c + 1);
        }
        prev[pivot..].copy_from_slice(&combo[pivot..]);
        let w = state.weight();
        if objective.better(w, best.weight) {
            best.weight = w;
            best.membership.copy_from_slice(state.membership());
            best.count = 1;
        } else if w == best.weight {
            best.count += 1;
        }
    }
    best
}

/// Lexicographic successor of an `r`-subset of `{0, …, m−1}`. Returns the
/// first position that changed, or `None` after the last subset.
fn advance(combo: &mut [usize], m: usize) -> Option<usize> {
    let r = combo.len();
    let i = (0..r).rev().find(|&i| combo[i] < m - r + i)?;
    combo[i] += 1;
    for j in i + 1..r {
        combo[j] = combo[j - 1] + 1;
    }
    Some(i)
}

/// The `rank`-th `r`-subset of `{0, …, m−1}` in lexicographic order.
fn unrank(m: usize, r: usize, mut rank: u64) -> Vec<usize> {
    let mut combo = Vec::with_capacity(r);
    let mut next = 0usize;
    for slot in 0..r {
        loop {
            let rest = binomial((m - next - 1) as u64, (r - slot - 1) as u64);
            if rank < rest {
                combo.push(next);
                next += 1;
                break;
            }
            rank -= rest;
            next += 1;
        }
    }
    combo
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
