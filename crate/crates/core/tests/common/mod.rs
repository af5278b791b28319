//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's graph or solver code; weights are recomputed
//! from raw bits.
#![allow(dead_code)]

use mixcut::{Dataset, Metric};

/// Rows of a dataset as plain bit vectors.
pub fn raw_rows(d: &Dataset) -> Vec<Vec<u8>> {
    (0..d.n_nodes())
        .map(|i| (0..d.k()).map(|k| d.bit(i, k)).collect())
        .collect()
}

pub fn raw_score(x: &[u8], y: &[u8]) -> u64 {
    x.iter()
        .zip(y)
        .filter(|(a, b)| **a == 1 && **b == 1)
        .count() as u64
}

pub fn raw_hamming(x: &[u8], y: &[u8]) -> u64 {
    x.iter().zip(y).filter(|(a, b)| a != b).count() as u64
}

pub fn raw_weight(rows: &[Vec<u8>], metric: Metric, i: usize, j: usize) -> u64 {
    match metric {
        Metric::Score => raw_score(&rows[i], &rows[j]),
        Metric::Hamming => raw_hamming(&rows[i], &rows[j]),
    }
}

/// Cut weight of the side given by `mask`, summed edge by edge.
pub fn raw_cut_weight(rows: &[Vec<u8>], metric: Metric, mask: u64) -> u64 {
    let n = rows.len();
    let mut w = 0;
    for i in 0..n {
        for j in 0..n {
            if mask >> i & 1 == 1 && mask >> j & 1 == 0 {
                w += raw_weight(rows, metric, i, j);
            }
        }
    }
    w
}

/// Result of scanning every subset mask.
pub struct NaiveOptimum {
    pub weight: u64,
    /// Distinct optimal bipartitions (each counted once).
    pub count: usize,
    /// One optimal side, containing node 0.
    pub mask: u64,
}

/// Scans all `2^(2N)` masks with exactly `N` bits; keeps only masks that
/// contain node 0 so each bipartition is seen once.
pub fn naive_optimum(rows: &[Vec<u8>], metric: Metric, maximize: bool) -> NaiveOptimum {
    let n = rows.len();
    let mut best: Option<NaiveOptimum> = None;
    for mask in 0u64..(1u64 << n) {
        if mask & 1 == 0 || mask.count_ones() as usize * 2 != n {
            continue;
        }
        let w = raw_cut_weight(rows, metric, mask);
        best = Some(match best {
            None => NaiveOptimum {
                weight: w,
                count: 1,
                mask,
            },
            Some(b) if (maximize && w > b.weight) || (!maximize && w < b.weight) => NaiveOptimum {
                weight: w,
                count: 1,
                mask,
            },
            Some(b) if w == b.weight => NaiveOptimum {
                count: b.count + 1,
                ..b
            },
            Some(b) => b,
        });
    }
    best.expect("at least one balanced cut")
}

/// `score(S, S̄) − score(T)` as the four sums over swapped/unswapped pairs:
/// `Σⱼ Σᵢ score(Vⱼ, Yᵢ) − score(Vⱼ, Xᵢ) + score(Uⱼ, Xᵢ) − score(Uⱼ, Yᵢ)`.
///
/// `labels[i]` is `true` for component one. The side of `mask` holding the
/// majority of component one plays `S`.
pub fn four_term_diff(rows: &[Vec<u8>], labels: &[bool], mask: u64) -> i64 {
    let n = rows.len();
    let in_mask = |i: usize| mask >> i & 1 == 1;
    let ones_in_mask = (0..n).filter(|&i| labels[i] && in_mask(i)).count();
    let half = n / 2;
    let in_s = |i: usize| {
        if 2 * ones_in_mask >= half {
            in_mask(i)
        } else {
            !in_mask(i)
        }
    };
    let x: Vec<usize> = (0..n).filter(|&i| labels[i] && in_s(i)).collect();
    let u: Vec<usize> = (0..n).filter(|&i| labels[i] && !in_s(i)).collect();
    let v: Vec<usize> = (0..n).filter(|&i| !labels[i] && in_s(i)).collect();
    let y: Vec<usize> = (0..n).filter(|&i| !labels[i] && !in_s(i)).collect();
    assert_eq!(u.len(), v.len());
    let s = |a: usize, b: usize| raw_score(&rows[a], &rows[b]) as i64;
    let mut total = 0;
    for j in 0..u.len() {
        for i in 0..x.len() {
            total += s(v[j], y[i]) - s(v[j], x[i]) + s(u[j], x[i]) - s(u[j], y[i]);
        }
    }
    total
}

/// Swapped nodes per side between a mask and the label partition.
pub fn raw_swap_count(labels: &[bool], mask: u64) -> usize {
    let n = labels.len();
    let overlap = (0..n).filter(|&i| labels[i] && mask >> i & 1 == 1).count();
    let half = n / 2;
    half - overlap.max(half - overlap)
}

/// Small deterministic generator for test inputs (xorshift64*).
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        Self(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 ^= self.0 >> 12;
        self.0 ^= self.0 << 25;
        self.0 ^= self.0 >> 27;
        self.0.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Mean and standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// `|a − b| ≤ 5e-7 |b|`: agreement to six significant digits.
pub fn six_digits(a: f64, b: f64) -> bool {
    (a - b).abs() <= 5e-7 * b.abs()
}
