use nalgebra::{DMatrix, SymmetricEigen};

use super::{Method, SolveResult};
use crate::error::{MixcutError, Result};
use crate::graph::{BalancedCut, CutGraph, Metric};
use crate::model::Dataset;

/// Spectral baseline with cut weight reported on the Hamming graph.
pub fn solve_spectral(dataset: &Dataset) -> Result<SolveResult> {
    solve_spectral_on(dataset, &CutGraph::build(dataset, Metric::Hamming))
}

/// Centers the `2N × K` bit matrix by its column means and splits the nodes
/// at the median of the leading left singular vector: the `N` largest
/// entries form one side. Sorting and splitting makes the answer
/// independent of the vector's sign.
///
/// The left singular vectors are taken from the `2N × 2N` Gram matrix of the
/// centered rows, which is cheap to build from popcounts when `K ≫ N`.
pub fn solve_spectral_on(dataset: &Dataset, graph: &CutGraph) -> Result<SolveResult> {
    let n = dataset.n_nodes();
    if graph.n_nodes() != n {
        return Err(MixcutError::NodeSetMismatch {
            cut: n,
            graph: graph.n_nodes(),
        });
    }
    let gram = centered_gram(dataset);
    let eig = SymmetricEigen::new(gram);
    let (top, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("non-empty dataset");
    if lambda.is_nan() || lambda <= 1e-9 {
        return Err(MixcutError::Degenerate(
            "all rows are identical; the centered data matrix is zero".into(),
        ));
    }
    let vector = eig.eigenvectors.column(top);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vector[j].total_cmp(&vector[i]).then(i.cmp(&j)));
    let best_cut = BalancedCut::from_side(n, &order[..n / 2])?;
    let best_weight = graph.cut_weight(&best_cut)?;
    Ok(SolveResult {
        best_cut,
        best_weight,
        method: Method::Spectral,
        objective: graph.metric().objective(),
        evaluations: 1,
        tie: false,
        climbs: Vec::new(),
    })
}

/// `G[i][j] = Σₖ (xᵢᵏ − mᵏ)(xⱼᵏ − mᵏ)` with `m` the column means, expanded
/// as `⟨xᵢ, xⱼ⟩ − aᵢ − aⱼ + ‖m‖²` where `aᵢ = ⟨xᵢ, m⟩`.
fn centered_gram(dataset: &Dataset) -> DMatrix<f64> {
    let n = dataset.n_nodes();
    let k = dataset.k();
    let mut col_sum = vec![0u64; k];
    for row in dataset.rows() {
        for (c, s) in col_sum.iter_mut().enumerate() {
            *s += row.get(c) as u64;
        }
    }
    let mean: Vec<f64> = col_sum.iter().map(|&s| s as f64 / n as f64).collect();
    let m_sq: f64 = mean.iter().map(|m| m * m).sum();
    let a: Vec<f64> = dataset
        .rows()
        .iter()
        .map(|r| (0..k).filter(|&c| r.get(c) == 1).map(|c| mean[c]).sum())
        .collect();
    DMatrix::from_fn(n, n, |i, j| {
        let s = dataset.row(i).score_unchecked(dataset.row(j)) as f64;
        s - a[i] - a[j] + m_sq
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MixtureModel;
    use crate::solvers::evaluate;

    #[test]
    fn separates_deterministic_instance() {
        let d = MixtureModel::homogeneous(8, 1.0, 0.0)
            .unwrap()
            .sample(4, 0)
            .unwrap();
        let r = solve_spectral(&d).unwrap();
        assert!(evaluate(&r, &d).unwrap());
        assert_eq!(r.best_weight, 16 * 8);
    }

    #[test]
    fn identical_rows_are_degenerate() {
        let d = MixtureModel::homogeneous(8, 1.0, 1.0)
            .unwrap()
            .sample(3, 0)
            .unwrap();
        assert!(matches!(
            solve_spectral(&d),
            Err(MixcutError::Degenerate(_))
        ));
    }

    #[test]
    fn gram_matches_dense_centering() {
        let m = MixtureModel::homogeneous(23, 0.3, 0.7).unwrap();
        let d = m.sample(4, 11).unwrap();
        let g = centered_gram(&d);
        let n = d.n_nodes();
        let x = DMatrix::from_fn(n, d.k(), |i, c| d.bit(i, c) as f64);
        let means = x.row_mean();
        let mut xc = x.clone();
        for mut row in xc.row_iter_mut() {
            row -= &means;
        }
        let dense = &xc * xc.transpose();
        assert!((g - dense).abs().max() < 1e-9);
    }

    #[test]
    fn always_balanced_and_separates_strong_signal() {
        let m = MixtureModel::homogeneous(300, 0.7, 0.3).unwrap();
        for seed in 0..10 {
            let d = m.sample(25, seed).unwrap();
            let r = solve_spectral(&d).unwrap();
            assert_eq!(r.best_cut.side_s().len(), 25);
            assert!(evaluate(&r, &d).unwrap());
        }
    }
}
