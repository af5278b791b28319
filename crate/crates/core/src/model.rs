//! Two-component product distributions over the Boolean cube and seeded
//! balanced sampling from them.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::error::{MixcutError, Result};
use crate::rng::row_stream;

/// Which mixture component a sample was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Component {
    One,
    Two,
}

impl Component {
    /// The label as used in data files: 1 or 2.
    pub fn label(self) -> u8 {
        match self {
            Self::One => 1,
            Self::Two => 2,
        }
    }

    pub fn from_label(label: u8) -> Result<Self> {
        match label {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            other => Err(MixcutError::OutOfRange(format!(
                "component label must be 1 or 2, got {other}"
            ))),
        }
    }

    pub fn other(self) -> Self {
        match self {
            Self::One => Self::Two,
            Self::Two => Self::One,
        }
    }
}

/// A pair of centers `p1, p2` in `[0,1]^K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelFile", into = "ModelFile")]
pub struct MixtureModel {
    p1: Vec<f64>,
    p2: Vec<f64>,
}

/// On-disk form: `{"p1": [...], "p2": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct ModelFile {
    p1: Vec<f64>,
    p2: Vec<f64>,
}

impl TryFrom<ModelFile> for MixtureModel {
    type Error = MixcutError;

    fn try_from(f: ModelFile) -> Result<Self> {
        MixtureModel::new(f.p1, f.p2)
    }
}

impl From<MixtureModel> for ModelFile {
    fn from(m: MixtureModel) -> Self {
        ModelFile { p1: m.p1, p2: m.p2 }
    }
}

impl MixtureModel {
    pub fn new(p1: Vec<f64>, p2: Vec<f64>) -> Result<Self> {
        if p1.is_empty() {
            return Err(MixcutError::InvalidModel(
                "dimension K must be at least 1".into(),
            ));
        }
        if p1.len() != p2.len() {
            return Err(MixcutError::InvalidModel(format!(
                "p1 has {} coordinates but p2 has {}",
                p1.len(),
                p2.len()
            )));
        }
        for (name, p) in [("p1", &p1), ("p2", &p2)] {
            if let Some((i, v)) = p
                .iter()
                .enumerate()
                .find(|(_, v)| !(0.0..=1.0).contains(*v))
            {
                return Err(MixcutError::InvalidModel(format!(
                    "{name}[{i}] = {v} is not a probability in [0,1]"
                )));
            }
        }
        Ok(Self { p1, p2 })
    }

    /// Every coordinate has the same pair of frequencies.
    pub fn homogeneous(k: usize, p1: f64, p2: f64) -> Result<Self> {
        Self::new(vec![p1; k], vec![p2; k])
    }

    /// The biased mixture used for the n-vs-K tradeoff curves: a fraction of
    /// coordinates carry a `large` gap, the rest a `small` one, and each pair
    /// of frequencies is centered on `base`.
    ///
    /// The biased coordinates are the first `round(fraction_biased * K)`,
    /// with at least one biased coordinate whenever the fraction is positive.
    pub fn figure1(k: usize, params: &Figure1Params) -> Result<Self> {
        if !(0.0..=1.0).contains(&params.fraction_biased) {
            return Err(MixcutError::InvalidModel(format!(
                "fraction_biased = {} is not in [0,1]",
                params.fraction_biased
            )));
        }
        let mut n_biased = (params.fraction_biased * k as f64).round() as usize;
        if params.fraction_biased > 0.0 && n_biased == 0 {
            n_biased = 1;
        }
        let mut p1 = Vec::with_capacity(k);
        let mut p2 = Vec::with_capacity(k);
        for i in 0..k {
            let gap = if i < n_biased {
                params.large
            } else {
                params.small
            };
            p1.push(params.base + gap / 2.0);
            p2.push(params.base - gap / 2.0);
        }
        Self::new(p1, p2)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.p1.len()
    }

    pub fn p1(&self) -> &[f64] {
        &self.p1
    }

    pub fn p2(&self) -> &[f64] {
        &self.p2
    }

    pub fn center(&self, component: Component) -> &[f64] {
        match component {
            Component::One => &self.p1,
            Component::Two => &self.p2,
        }
    }

    /// Average squared coordinate gap `(1/K) Σ (p1ᵢ − p2ᵢ)²`.
    pub fn divergence(&self) -> f64 {
        self.squared_distance() / self.k() as f64
    }

    /// `‖p1 − p2‖²`, i.e. `K·γ`.
    pub fn squared_distance(&self) -> f64 {
        self.p1
            .iter()
            .zip(&self.p2)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    /// Same model with the two components exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            p1: self.p2.clone(),
            p2: self.p1.clone(),
        }
    }

    /// Draws a single vector from `component` using row stream `row` of `seed`.
    pub fn draw(&self, component: Component, seed: u64, row: u64) -> BitVector {
        let center = self.center(component);
        let mut rng = row_stream(seed, row);
        let mut v = BitVector::zeros(center.len());
        for (k, &p) in center.iter().enumerate() {
            if rng.gen::<f64>() < p {
                v.set(k, true);
            }
        }
        v
    }

    /// Balanced sample: rows `0..N` from component one, rows `N..2N` from
    /// component two. Row `i` uses its own stream, so the result is a pure
    /// function of `(model, N, seed)`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Dataset> {
        if n == 0 {
            return Err(MixcutError::OutOfRange("N must be at least 1".into()));
        }
        let labels: Vec<Component> = std::iter::repeat_n(Component::One, n)
            .chain(std::iter::repeat_n(Component::Two, n))
            .collect();
        let rows = labels
            .iter()
            .enumerate()
            .map(|(i, &c)| self.draw(c, seed, i as u64))
            .collect();
        Ok(Dataset {
            rows,
            labels,
            n,
            k: self.k(),
            seed,
        })
    }
}

/// Parameters of the canned biased mixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Figure1Params {
    pub fraction_biased: f64,
    pub small: f64,
    pub large: f64,
    pub base: f64,
}

impl Default for Figure1Params {
    fn default() -> Self {
        Self {
            fraction_biased: 0.1,
            small: 1e-5,
            large: 0.1265,
            base: 0.5,
        }
    }
}

/// `2N` labelled bit vectors with exactly `N` from each component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    rows: Vec<BitVector>,
    labels: Vec<Component>,
    n: usize,
    k: usize,
    seed: u64,
}

impl Dataset {
    /// Assembles a dataset from explicit rows, checking balance and widths.
    pub fn from_rows(rows: Vec<BitVector>, labels: Vec<Component>, seed: u64) -> Result<Self> {
        if rows.is_empty() || rows.len() != labels.len() {
            return Err(MixcutError::InvalidModel(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let k = rows[0].len();
        if let Some(bad) = rows.iter().find(|r| r.len() != k) {
            return Err(MixcutError::LengthMismatch {
                expected: k,
                actual: bad.len(),
            });
        }
        let ones = labels.iter().filter(|&&c| c == Component::One).count();
        if 2 * ones != labels.len() {
            return Err(MixcutError::InvalidModel(format!(
                "unbalanced labels: {ones} of {} rows from component one",
                labels.len()
            )));
        }
        Ok(Self {
            n: ones,
            k,
            rows,
            labels,
            seed,
        })
    }

    /// Samples per component.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of rows, `2N`.
    pub fn n_nodes(&self) -> usize {
        self.rows.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn labels(&self) -> &[Component] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> Component {
        self.labels[i]
    }

    /// Bit `k` of row `i` as 0 or 1.
    pub fn bit(&self, i: usize, k: usize) -> u8 {
        self.rows[i].get(k)
    }

    /// Coordinate-wise mean of the rows drawn from `component`.
    pub fn empirical_center(&self, component: Component) -> Vec<f64> {
        let mut sums = vec![0u64; self.k];
        let mut count = 0u64;
        for (row, _) in self
            .rows
            .iter()
            .zip(&self.labels)
            .filter(|(_, &c)| c == component)
        {
            count += 1;
            for (k, s) in sums.iter_mut().enumerate() {
                *s += row.get(k) as u64;
            }
        }
        sums.into_iter().map(|s| s as f64 / count as f64).collect()
    }
}
