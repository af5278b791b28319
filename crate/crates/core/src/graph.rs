//! Complete weighted graphs over a sample, balanced cuts, and the
//! difference statistics used to compare a cut against the true partition.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::error::{MixcutError, Result};
use crate::model::{Component, Dataset, MixtureModel};

/// Edge-weight function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// Inner product of the two bit vectors. The true partition is the
    /// minimum balanced cut under this weight.
    #[serde(alias = "inner_product", alias = "innerproductscore")]
    Score,
    /// Hamming distance. The true partition is the maximum balanced cut.
    Hamming,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Self::Score => "score",
            Self::Hamming => "hamming",
        }
    }

    /// Direction in which the true partition is expected to be extremal.
    pub fn objective(self) -> Objective {
        match self {
            Self::Score => Objective::Min,
            Self::Hamming => Objective::Max,
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Metric {
    type Err = MixcutError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "score" | "inner_product" | "innerproductscore" => Ok(Self::Score),
            "hamming" => Ok(Self::Hamming),
            other => Err(MixcutError::InvalidConfig(format!(
                "unknown metric {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Max,
    Min,
}

impl Objective {
    /// True if `a` is strictly better than `b`.
    #[inline]
    pub fn better(self, a: u64, b: u64) -> bool {
        match self {
            Self::Max => a > b,
            Self::Min => a < b,
        }
    }
}

/// Inner product of two bit vectors.
pub fn score(x: &BitVector, y: &BitVector) -> Result<u32> {
    x.score(y)
}

/// Hamming distance between two bit vectors.
pub fn hamming(x: &BitVector, y: &BitVector) -> Result<u32> {
    x.hamming(y)
}

/// Symmetric integer weight matrix over `2N` nodes with a zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutGraph {
    n_nodes: usize,
    metric: Metric,
    weights: Vec<u32>,
    row_sums: Vec<u64>,
}

impl CutGraph {
    /// All pairwise weights of `dataset` under `metric`.
    pub fn build(dataset: &Dataset, metric: Metric) -> Self {
        let rows = dataset.rows();
        let n = rows.len();
        let weights: Vec<u32> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                (0..n).map(move |j| {
                    if i == j {
                        0
                    } else {
                        match metric {
                            Metric::Score => rows[i].score_unchecked(&rows[j]),
                            Metric::Hamming => rows[i].hamming_unchecked(&rows[j]),
                        }
                    }
                })
            })
            .collect();
        Self::assemble(n, metric, weights)
    }

    /// Wraps an explicit row-major matrix, checking symmetry and the diagonal.
    pub fn from_weights(n_nodes: usize, metric: Metric, weights: Vec<u32>) -> Result<Self> {
        if weights.len() != n_nodes * n_nodes {
            return Err(MixcutError::LengthMismatch {
                expected: n_nodes * n_nodes,
                actual: weights.len(),
            });
        }
        if !n_nodes.is_multiple_of(2) || n_nodes == 0 {
            return Err(MixcutError::InvalidCut(format!(
                "a balanced graph needs an even, positive node count, got {n_nodes}"
            )));
        }
        for i in 0..n_nodes {
            if weights[i * n_nodes + i] != 0 {
                return Err(MixcutError::InvalidModel(format!(
                    "nonzero diagonal at node {i}"
                )));
            }
            for j in 0..i {
                if weights[i * n_nodes + j] != weights[j * n_nodes + i] {
                    return Err(MixcutError::InvalidModel(format!(
                        "asymmetric weight between nodes {i} and {j}"
                    )));
                }
            }
        }
        Ok(Self::assemble(n_nodes, metric, weights))
    }

    fn assemble(n_nodes: usize, metric: Metric, weights: Vec<u32>) -> Self {
        let row_sums = weights
            .chunks(n_nodes.max(1))
            .map(|r| r.iter().map(|&w| w as u64).sum())
            .collect();
        Self {
            n_nodes,
            metric,
            weights,
            row_sums,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    /// Nodes per side of a balanced cut.
    pub fn half(&self) -> usize {
        self.n_nodes / 2
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> u32 {
        self.weights[i * self.n_nodes + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.weights[i * self.n_nodes..(i + 1) * self.n_nodes]
    }

    #[inline]
    pub fn row_sum(&self, i: usize) -> u64 {
        self.row_sums[i]
    }

    /// Sum of weights over edges with one endpoint on each side.
    pub fn cut_weight(&self, cut: &BalancedCut) -> Result<u64> {
        self.check_cut(cut)?;
        Ok(self.membership_weight(cut.membership()))
    }

    pub(crate) fn check_cut(&self, cut: &BalancedCut) -> Result<()> {
        if cut.n_nodes() != self.n_nodes {
            return Err(MixcutError::NodeSetMismatch {
                cut: cut.n_nodes(),
                graph: self.n_nodes,
            });
        }
        Ok(())
    }

    pub(crate) fn membership_weight(&self, in_s: &[bool]) -> u64 {
        let mut total = 0u64;
        for i in (0..self.n_nodes).filter(|&i| in_s[i]) {
            let row = self.row(i);
            for j in (0..self.n_nodes).filter(|&j| !in_s[j]) {
                total += row[j] as u64;
            }
        }
        total
    }

    /// `cut_weight(other) − cut_weight(reference)`. Under the score metric
    /// with the true partition as reference this is the advantage of the
    /// true partition over `other`.
    pub fn diff_cut(&self, reference: &BalancedCut, other: &BalancedCut) -> Result<i64> {
        let a = self.cut_weight(reference)? as i64;
        let b = self.cut_weight(other)? as i64;
        Ok(b - a)
    }
}

/// A bipartition of `2N` nodes into two sides of `N`, stored canonically
/// with node 0 on side S so that a cut and its mirror compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BalancedCut {
    in_s: Vec<bool>,
}

impl BalancedCut {
    /// Cut whose side S is `side_s`; the mirror is taken if node 0 is absent.
    pub fn from_side(n_nodes: usize, side_s: &[usize]) -> Result<Self> {
        let mut in_s = vec![false; n_nodes];
        for &i in side_s {
            if i >= n_nodes {
                return Err(MixcutError::InvalidCut(format!(
                    "node {i} out of range for {n_nodes} nodes"
                )));
            }
            if in_s[i] {
                return Err(MixcutError::InvalidCut(format!("node {i} listed twice")));
            }
            in_s[i] = true;
        }
        Self::from_membership(in_s)
    }

    pub fn from_membership(mut in_s: Vec<bool>) -> Result<Self> {
        let n_nodes = in_s.len();
        let size = in_s.iter().filter(|&&b| b).count();
        if n_nodes == 0 || !n_nodes.is_multiple_of(2) || 2 * size != n_nodes {
            return Err(MixcutError::InvalidCut(format!(
                "side S has {size} of {n_nodes} nodes; a balanced cut needs exactly half"
            )));
        }
        if !in_s[0] {
            in_s.iter_mut().for_each(|b| *b = !*b);
        }
        Ok(Self { in_s })
    }

    /// Cut with S = nodes whose bit is set in `mask` (at most 64 nodes).
    pub fn from_mask(n_nodes: usize, mask: u64) -> Result<Self> {
        if n_nodes > 64 {
            return Err(MixcutError::OutOfRange(format!(
                "bitmask cuts support at most 64 nodes, got {n_nodes}"
            )));
        }
        Self::from_membership((0..n_nodes).map(|i| (mask >> i) & 1 == 1).collect())
    }

    /// The partition induced by the hidden component labels.
    pub fn truth(dataset: &Dataset) -> Self {
        Self::from_membership(
            dataset
                .labels()
                .iter()
                .map(|&c| c == dataset.label(0))
                .collect(),
        )
        .expect("datasets are balanced by construction")
    }

    pub fn n_nodes(&self) -> usize {
        self.in_s.len()
    }

    /// Nodes per side.
    pub fn half(&self) -> usize {
        self.in_s.len() / 2
    }

    pub fn membership(&self) -> &[bool] {
        &self.in_s
    }

    pub fn contains(&self, i: usize) -> bool {
        self.in_s[i]
    }

    /// Sorted members of side S (always contains node 0).
    pub fn side_s(&self) -> Vec<usize> {
        (0..self.in_s.len()).filter(|&i| self.in_s[i]).collect()
    }

    pub fn side_sbar(&self) -> Vec<usize> {
        (0..self.in_s.len()).filter(|&i| !self.in_s[i]).collect()
    }

    pub fn to_mask(&self) -> Option<u64> {
        (self.in_s.len() <= 64).then(|| {
            self.in_s
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .fold(0u64, |m, (i, _)| m | (1 << i))
        })
    }

    fn check_same_nodes(&self, other: &Self) -> Result<()> {
        if self.n_nodes() != other.n_nodes() {
            return Err(MixcutError::NodeSetMismatch {
                cut: other.n_nodes(),
                graph: self.n_nodes(),
            });
        }
        Ok(())
    }

    /// Minimal number of cross-side exchanges turning `self` into `other`,
    /// treating both as unordered bipartitions: `N − max(|S∩S'|, |S∩S̄'|)`.
    pub fn swap_count(&self, other: &Self) -> Result<usize> {
        self.check_same_nodes(other)?;
        let same = self
            .in_s
            .iter()
            .zip(&other.in_s)
            .filter(|(a, b)| **a && **b)
            .count();
        let n = self.half();
        Ok(n - same.max(n - same))
    }

    /// Splits the nodes by their movement from `self` (the reference) to
    /// `other`, after orienting `other` to overlap the reference's side S
    /// as much as possible.
    pub fn swap_sets(&self, other: &Self) -> Result<SwapSets> {
        self.check_same_nodes(other)?;
        let n = self.half();
        let overlap = (0..self.n_nodes())
            .filter(|&i| self.in_s[i] && other.in_s[i])
            .count();
        let flip = overlap < n - overlap;
        let mut sets = SwapSets::default();
        for i in 0..self.n_nodes() {
            let ref_s = self.in_s[i];
            let oth_s = other.in_s[i] != flip;
            match (ref_s, oth_s) {
                (true, true) => sets.stay_s.push(i),
                (false, false) => sets.stay_sbar.push(i),
                (true, false) => sets.moved_out.push(i),
                (false, true) => sets.moved_in.push(i),
            }
        }
        Ok(sets)
    }
}

/// Node roles relative to a reference cut `(S_ref, S̄_ref)` and an oriented
/// other cut `(S, S̄)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SwapSets {
    /// In `S_ref` and `S`.
    pub stay_s: Vec<usize>,
    /// In `S̄_ref` and `S̄`.
    pub stay_sbar: Vec<usize>,
    /// Moved from `S_ref` to `S̄`.
    pub moved_out: Vec<usize>,
    /// Moved from `S̄_ref` to `S`.
    pub moved_in: Vec<usize>,
}

impl SwapSets {
    pub fn l(&self) -> usize {
        self.moved_out.len()
    }
}

/// Expected score advantage of `z` toward its own component:
/// `Σ zᵏ (p1ᵏ − p2ᵏ)` for component one, negated for component two.
pub fn diff_node(z: &BitVector, model: &MixtureModel, origin: Component) -> Result<f64> {
    if z.len() != model.k() {
        return Err(MixcutError::LengthMismatch {
            expected: model.k(),
            actual: z.len(),
        });
    }
    let s: f64 = model
        .p1()
        .iter()
        .zip(model.p2())
        .enumerate()
        .filter(|(k, _)| z.get(*k) == 1)
        .map(|(_, (a, b))| a - b)
        .sum();
    Ok(match origin {
        Component::One => s,
        Component::Two => -s,
    })
}

/// `Σⱼ uⱼᵏ − Σⱼ vⱼᵏ` at coordinate `k` over two equal-sized swapped groups.
pub fn swap_imbalance(
    dataset: &Dataset,
    swapped_u: &[usize],
    swapped_v: &[usize],
    k: usize,
) -> Result<i64> {
    if swapped_u.len() != swapped_v.len() {
        return Err(MixcutError::LengthMismatch {
            expected: swapped_u.len(),
            actual: swapped_v.len(),
        });
    }
    if k >= dataset.k() {
        return Err(MixcutError::OutOfRange(format!(
            "dimension {k} out of range for K = {}",
            dataset.k()
        )));
    }
    let bit_sum = |nodes: &[usize]| -> Result<i64> {
        nodes.iter().try_fold(0i64, |acc, &i| {
            if i >= dataset.n_nodes() {
                return Err(MixcutError::OutOfRange(format!(
                    "node {i} out of range for {} nodes",
                    dataset.n_nodes()
                )));
            }
            Ok(acc + dataset.bit(i, k) as i64)
        })
    };
    Ok(bit_sum(swapped_u)? - bit_sum(swapped_v)?)
}

/// Conditional expectation of the cut advantage given the bits of the
/// swapped nodes: `(N − L) Σⱼ Σₖ (p1ᵏ − p2ᵏ)(uⱼᵏ − vⱼᵏ)`, where `u` are the
/// component-one nodes moved off the component-one side and `v` the
/// component-two nodes moved onto it.
pub fn conditional_advantage(
    dataset: &Dataset,
    model: &MixtureModel,
    swapped_u: &[usize],
    swapped_v: &[usize],
) -> Result<f64> {
    let l = swapped_u.len();
    let n = dataset.n();
    if l > n {
        return Err(MixcutError::OutOfRange(format!("L = {l} exceeds N = {n}")));
    }
    let mut total = 0.0;
    for k in 0..dataset.k() {
        let f = swap_imbalance(dataset, swapped_u, swapped_v, k)?;
        total += (model.p1()[k] - model.p2()[k]) * f as f64;
    }
    Ok((n - l) as f64 * total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MixtureModel;
    use proptest::prelude::*;

    fn four_node() -> Dataset {
        MixtureModel::homogeneous(3, 1.0, 0.0)
            .unwrap()
            .sample(2, 0)
            .unwrap()
    }

    #[test]
    fn deterministic_graph_weights() {
        let g = CutGraph::build(&four_node(), Metric::Hamming);
        assert_eq!(g.weight(0, 1), 0);
        assert_eq!(g.weight(2, 3), 0);
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert_eq!(g.weight(i, j), 3);
            assert_eq!(g.weight(j, i), 3);
        }
        for i in 0..4 {
            assert_eq!(g.weight(i, i), 0);
        }
    }

    #[test]
    fn four_node_cut_weights_by_brute_force() {
        let g = CutGraph::build(&four_node(), Metric::Hamming);
        let truth = BalancedCut::from_side(4, &[0, 1]).unwrap();
        assert_eq!(g.cut_weight(&truth).unwrap(), 12);
        for side in [[0, 2], [0, 3]] {
            let c = BalancedCut::from_side(4, &side).unwrap();
            assert_eq!(g.cut_weight(&c).unwrap(), 6);
        }
        let zero = CutGraph::from_weights(4, Metric::Score, vec![0; 16]).unwrap();
        assert_eq!(zero.cut_weight(&truth).unwrap(), 0);
    }

    #[test]
    fn node_set_mismatch() {
        let g = CutGraph::build(&four_node(), Metric::Hamming);
        let c = BalancedCut::from_side(6, &[0, 1, 2]).unwrap();
        assert!(matches!(
            g.cut_weight(&c),
            Err(MixcutError::NodeSetMismatch { cut: 6, graph: 4 })
        ));
        let d = BalancedCut::from_side(4, &[0, 1]).unwrap();
        assert!(d.swap_count(&c).is_err());
    }

    #[test]
    fn cut_validation_and_canonical_form() {
        assert!(BalancedCut::from_side(4, &[0]).is_err());
        assert!(BalancedCut::from_side(4, &[0, 0]).is_err());
        assert!(BalancedCut::from_side(4, &[0, 7]).is_err());
        assert!(BalancedCut::from_side(5, &[0, 1]).is_err());
        let a = BalancedCut::from_side(6, &[3, 4, 5]).unwrap();
        let b = BalancedCut::from_side(6, &[0, 1, 2]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.side_s(), vec![0, 1, 2]);
        assert_eq!(a.to_mask(), Some(0b111));
    }

    #[test]
    fn swap_count_examples() {
        let r = BalancedCut::from_side(6, &[0, 1, 2]).unwrap();
        assert_eq!(r.swap_count(&r).unwrap(), 0);
        let one = BalancedCut::from_side(6, &[0, 1, 3]).unwrap();
        assert_eq!(r.swap_count(&one).unwrap(), 1);

        let mut counts = [0usize; 4];
        let mut total = 0;
        for mask in 0u64..64 {
            if mask.count_ones() == 3 && mask & 1 == 1 {
                let c = BalancedCut::from_mask(6, mask).unwrap();
                counts[r.swap_count(&c).unwrap()] += 1;
                total += 1;
            }
        }
        assert_eq!(total, 10);
        assert_eq!(counts, [1, 9, 0, 0]);
    }

    #[test]
    fn swap_sets_orientation() {
        let r = BalancedCut::from_side(8, &[0, 1, 2, 3]).unwrap();
        let o = BalancedCut::from_side(8, &[0, 1, 4, 5]).unwrap();
        let s = r.swap_sets(&o).unwrap();
        assert_eq!(s.l(), 2);
        assert_eq!(s.moved_out, vec![2, 3]);
        assert_eq!(s.moved_in, vec![4, 5]);

        let mirror = BalancedCut::from_side(8, &[0, 5, 6, 7]).unwrap();
        let s = r.swap_sets(&mirror).unwrap();
        assert_eq!(s.l(), 1);
        assert_eq!(s.moved_out, vec![0]);
        assert_eq!(s.moved_in, vec![4]);
    }

    #[test]
    fn diff_node_examples() {
        let m = MixtureModel::new(vec![0.9, 0.9], vec![0.1, 0.1]).unwrap();
        let z = BitVector::from_bits(&[1, 1]);
        assert!((diff_node(&z, &m, Component::One).unwrap() - 1.6).abs() < 1e-12);
        assert!((diff_node(&z, &m, Component::Two).unwrap() + 1.6).abs() < 1e-12);
        let same = MixtureModel::homogeneous(2, 0.4, 0.4).unwrap();
        assert_eq!(diff_node(&z, &same, Component::One).unwrap(), 0.0);
        assert!(diff_node(&BitVector::zeros(3), &m, Component::One).is_err());
    }

    #[test]
    fn swap_imbalance_examples() {
        let rows = vec![
            BitVector::from_bits(&[1, 0]),
            BitVector::from_bits(&[0, 1]),
            BitVector::from_bits(&[0, 1]),
            BitVector::from_bits(&[1, 1]),
        ];
        let labels = vec![
            Component::One,
            Component::One,
            Component::Two,
            Component::Two,
        ];
        let d = Dataset::from_rows(rows, labels, 0).unwrap();
        assert_eq!(swap_imbalance(&d, &[0], &[2], 0).unwrap(), 1);
        assert_eq!(swap_imbalance(&d, &[1], &[2], 0).unwrap(), 0);
        assert_eq!(swap_imbalance(&d, &[1], &[2], 1).unwrap(), 0);
        assert!(swap_imbalance(&d, &[0], &[9], 0).is_err());
        assert!(swap_imbalance(&d, &[0], &[2], 5).is_err());
        assert!(swap_imbalance(&d, &[0, 1], &[2], 0).is_err());
    }

    #[test]
    fn diff_cut_of_reference_is_zero() {
        let m = MixtureModel::homogeneous(9, 0.7, 0.2).unwrap();
        let d = m.sample(3, 4).unwrap();
        let g = CutGraph::build(&d, Metric::Score);
        let t = BalancedCut::truth(&d);
        assert_eq!(g.diff_cut(&t, &t).unwrap(), 0);
    }

    fn instance() -> impl Strategy<Value = (Dataset, u64)> {
        (1usize..=5, 1usize..40, any::<u64>(), any::<u64>()).prop_map(|(n, k, seed, mseed)| {
            let p1: Vec<f64> = (0..k)
                .map(|i| (crate::rng::derive_seed(mseed, &[1, i as u64]) % 1001) as f64 / 1000.0)
                .collect();
            let p2: Vec<f64> = (0..k)
                .map(|i| (crate::rng::derive_seed(mseed, &[2, i as u64]) % 1001) as f64 / 1000.0)
                .collect();
            let d = MixtureModel::new(p1, p2).unwrap().sample(n, seed).unwrap();
            (d, mseed)
        })
    }

    proptest! {
        #[test]
        fn graph_invariants_and_duality((d, pick) in instance()) {
            let h = CutGraph::build(&d, Metric::Hamming);
            let s = CutGraph::build(&d, Metric::Score);
            let n = d.n_nodes();
            for i in 0..n {
                prop_assert_eq!(h.weight(i, i), 0);
                for j in 0..n {
                    prop_assert_eq!(h.weight(i, j), h.weight(j, i));
                    prop_assert!(h.weight(i, j) as usize <= d.k());
                    prop_assert!(s.weight(i, j) as usize <= d.k());
                    if i != j {
                        prop_assert_eq!(
                            h.weight(i, j),
                            d.row(i).popcount() + d.row(j).popcount() - 2 * s.weight(i, j)
                        );
                    }
                }
            }
            let mut membership: Vec<bool> = (0..n).map(|i| i < n / 2).collect();
            let idx = (pick as usize) % n;
            membership.rotate_left(idx);
            let cut = BalancedCut::from_membership(membership.clone()).unwrap();
            let mirror = BalancedCut::from_membership(membership.iter().map(|b| !b).collect()).unwrap();
            prop_assert_eq!(h.cut_weight(&cut).unwrap(), h.cut_weight(&mirror).unwrap());
            let pop: u64 = d.rows().iter().map(|r| r.popcount() as u64).sum();
            prop_assert_eq!(
                h.cut_weight(&cut).unwrap(),
                d.n() as u64 * pop - 2 * s.cut_weight(&cut).unwrap()
            );
        }
    }
}
