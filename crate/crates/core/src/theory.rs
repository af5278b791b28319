//! Closed-form bounds for balanced max-cut recovery: the deviation budget Δ,
//! the martingale variance proxy σ², the per-regime sample-size thresholds,
//! the union-bound failure budget, the bad-node predicate and Hoeffding
//! tails.
//!
//! Logarithms: `ln` is natural; bare `log` and `log log` are base 2.
//! Quantities on the order of `N^{-32}` are computed in log space.

use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::error::{MixcutError, Result};
use crate::graph::diff_node;
use crate::model::{Component, MixtureModel};

pub const LOG_CONVENTION: &str = "ln = natural log; log and log log = base 2";

/// Regime 1 constant on `KN` (`KN ≥ c₁ lnN loglogN / γ²`).
pub const C1: f64 = 1488.0;
/// Regime 1 constant on `K` implied by `C1` and the regime boundary.
pub const C1_IMPLIED_K: f64 = 2976.0;
/// Regime 2 constant on `K` (`K ≥ c₂ lnN / γ`).
pub const C2: f64 = 512.0;
/// Regime 2 constant on `KN`.
pub const C0: f64 = 2000.0;
/// Regime 3 constant on `K` (`K ≥ c₃ lnN / γ`).
pub const C3: f64 = 188.0;
/// `K ≥ 256 lnN / γ` makes every bad-node probability at most `N^{-32}`.
pub const C_RHO1: f64 = 256.0;
/// Exponent in the bad-node probability `N^{-32}`.
pub const BAD_NODE_EXPONENT: f64 = 32.0;
/// Per-L arrays in a [`BoundReport`] stop at this L; sums use every L.
pub const MAX_REPORTED_L: usize = 64;

/// `log₂ log₂ N`.
pub fn log_log(n: f64) -> f64 {
    n.log2().log2()
}

fn check_n(n: usize) -> Result<()> {
    if n < 4 {
        return Err(MixcutError::OutOfRange(format!(
            "N must be at least 4, got {n}"
        )));
    }
    Ok(())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma == 0.0 {
        return Err(MixcutError::ZeroDivergence);
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(MixcutError::OutOfRange(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    Ok(())
}

/// `Δ = 8N ln2 + 4K ln2 (log log N + 1) + (3/2) ln N`.
pub fn delta(n: usize, k: usize) -> Result<f64> {
    check_n(n)?;
    if k == 0 {
        return Err(MixcutError::OutOfRange("K must be at least 1".into()));
    }
    let (n, k) = (n as f64, k as f64);
    let ln2 = std::f64::consts::LN_2;
    Ok(8.0 * n * ln2 + 4.0 * k * ln2 * (log_log(n) + 1.0) + 1.5 * n.ln())
}

/// `σ² ≤ 4(N−L)L²Kγ + 4(N−L)LΔ` for `1 ≤ L ≤ N/2`.
pub fn sigma_sq_bound(n: usize, l: usize, k: usize, gamma: f64, delta: f64) -> Result<f64> {
    if l == 0 || 2 * l > n {
        return Err(MixcutError::OutOfRange(format!(
            "L must lie in [1, N/2], got L = {l} with N = {n}"
        )));
    }
    let (n, l, k) = (n as f64, l as f64, k as f64);
    Ok(4.0 * (n - l) * l * l * k * gamma + 4.0 * (n - l) * l * delta)
}

/// Context shared by the bound calculators for one model and sample size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryContext {
    pub n: usize,
    pub k: usize,
    pub gamma: f64,
    /// `E[diff(X)]` for a component-one point, `⟨p1, p1 − p2⟩`, after
    /// orienting the components so that `eta ≥ Kγ/2`.
    pub eta: f64,
    /// The components were exchanged to satisfy `eta ≥ Kγ/2`.
    pub components_swapped: bool,
    pub log_convention: String,
}

impl TheoryContext {
    pub fn new(model: &MixtureModel, n: usize) -> Self {
        let k = model.k();
        let gamma = model.divergence();
        let eta_of = |m: &MixtureModel| expected_diff(m, Component::One);
        let mut eta = eta_of(model);
        let half = k as f64 * gamma / 2.0;
        let components_swapped = eta < half;
        if components_swapped {
            eta = eta_of(&model.swapped());
        }
        Self {
            n,
            k,
            gamma,
            eta,
            components_swapped,
            log_convention: LOG_CONVENTION.into(),
        }
    }

    /// `E[diff(Y)]` for a point of the other component, `Kγ − η`.
    pub fn eta_other(&self) -> f64 {
        self.k as f64 * self.gamma - self.eta
    }
}

/// `E[diff(Z)]` for `Z` drawn from `origin`.
pub fn expected_diff(model: &MixtureModel, origin: Component) -> f64 {
    let s: f64 = model
        .center(origin)
        .iter()
        .zip(model.p1().iter().zip(model.p2()))
        .map(|(p, (a, b))| p * (a - b))
        .sum();
    match origin {
        Component::One => s,
        Component::Two => -s,
    }
}

/// True iff `diff(z) < E[diff(z)] − Kγ/4` for a point from `origin`.
pub fn is_bad_node(z: &BitVector, model: &MixtureModel, origin: Component) -> Result<bool> {
    let d = diff_node(z, model, origin)?;
    let threshold = expected_diff(model, origin) - model.squared_distance() / 4.0;
    Ok(d < threshold)
}

/// Smallest `K` for which the bad-node tail is at most `tau`: `⌈8 ln(1/τ)/γ⌉`.
pub fn bad_node_min_k(tau: f64, gamma: f64) -> Result<usize> {
    check_gamma(gamma)?;
    if !(tau > 0.0 && tau < 1.0) {
        return Err(MixcutError::OutOfRange(format!(
            "tau must lie in (0,1), got {tau}"
        )));
    }
    Ok((8.0 * (1.0 / tau).ln() / gamma).ceil() as usize)
}

/// Sample-size regime of the threshold analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// `N ≤ log log N / 2γ`: few samples, many features.
    Case1,
    /// `log log N / 2γ < N ≤ K log log N / 20`.
    Case2,
    /// `N ≥ K log log N / 20`.
    Case3,
}

impl Regime {
    pub fn number(self) -> u8 {
        match self {
            Self::Case1 => 1,
            Self::Case2 => 2,
            Self::Case3 => 3,
        }
    }
}

/// Feature-count thresholds for each regime at a fixed `(N, γ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequiredK {
    pub n: usize,
    pub gamma: f64,
    /// `1488 lnN loglogN / (N γ²)`, i.e. the regime-1 condition on `KN` read
    /// as a bound on `K`.
    pub case1_k: f64,
    /// `2976 lnN / γ`, implied by the regime-1 condition.
    pub case1_implied_k: f64,
    /// `512 lnN / γ`.
    pub case2_k: f64,
    /// `2000 lnN loglogN / (N γ²)`, the regime-2 condition on `KN`.
    pub case2_kn_k: f64,
    /// `188 lnN / γ`.
    pub case3_k: f64,
    /// `256 lnN / γ`, needed for the bad-node budget in every regime.
    pub rho1_k: f64,
    /// `N ≤ log log N / 2γ`; depends only on `(N, γ)`.
    pub case1_active: bool,
}

impl RequiredK {
    /// Regime containing `(N, γ, K)`. Cases 2 and 3 share the boundary
    /// `N = K log log N / 20`, which is assigned to Case 3.
    pub fn regime(&self, k: usize) -> Regime {
        if self.case1_active {
            Regime::Case1
        } else if self.n as f64 >= k as f64 * log_log(self.n as f64) / 20.0 {
            Regime::Case3
        } else {
            Regime::Case2
        }
    }

    /// Smallest `K` satisfying every requirement of `regime`.
    pub fn threshold(&self, regime: Regime) -> f64 {
        match regime {
            Regime::Case1 => self.case1_k,
            Regime::Case2 => self.case2_k.max(self.case2_kn_k),
            Regime::Case3 => self.case3_k,
        }
    }

    /// Whether `K` meets the requirements of `regime` (ignoring whether
    /// `K` places the instance inside that regime).
    pub fn meets(&self, regime: Regime, k: usize) -> bool {
        k as f64 >= self.threshold(regime)
    }

    /// `K` lies in `regime` and meets its requirements.
    pub fn satisfied(&self, regime: Regime, k: usize) -> bool {
        self.regime(k) == regime && self.meets(regime, k)
    }
}

pub fn required_k(n: usize, gamma: f64) -> Result<RequiredK> {
    check_n(n)?;
    check_gamma(gamma)?;
    let nf = n as f64;
    let ln_n = nf.ln();
    let ll = log_log(nf);
    Ok(RequiredK {
        n,
        gamma,
        case1_k: C1 * ln_n * ll / (nf * gamma * gamma),
        case1_implied_k: C1_IMPLIED_K * ln_n / gamma,
        case2_k: C2 * ln_n / gamma,
        case2_kn_k: C0 * ln_n * ll / (nf * gamma * gamma),
        case3_k: C3 * ln_n / gamma,
        rho1_k: C_RHO1 * ln_n / gamma,
        case1_active: nf <= ll / (2.0 * gamma),
    })
}

/// Per-`L` check that `t²/2σ² ≥ 4L lnN` with `t = KL(N−L)γ/2`, the bound
/// that makes each cut's failure probability at most `2/N^{4L}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rho3Exponent {
    pub l: usize,
    pub exponent: f64,
    pub required: f64,
    pub holds: bool,
}

pub fn rho3_exponents(n: usize, k: usize, gamma: f64) -> Result<Vec<Rho3Exponent>> {
    let d = delta(n, k)?;
    let ln_n = (n as f64).ln();
    (1..=n / 2)
        .map(|l| {
            let s2 = sigma_sq_bound(n, l, k, gamma, d)?;
            let t = k as f64 * l as f64 * (n - l) as f64 * gamma / 2.0;
            let exponent = t * t / (2.0 * s2);
            let required = 4.0 * l as f64 * ln_n;
            Ok(Rho3Exponent {
                l,
                exponent,
                required,
                holds: exponent >= required,
            })
        })
        .collect()
}

/// A probability carried in log space alongside its (possibly underflowed)
/// value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogProb {
    pub ln: f64,
    pub value: f64,
}

impl LogProb {
    pub fn from_ln(ln: f64) -> Self {
        Self {
            ln,
            value: ln.exp(),
        }
    }

    pub fn log10(&self) -> f64 {
        self.ln / std::f64::consts::LN_10
    }
}

/// Which hypotheses of the recovery theorem hold at `(N, K, γ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Satisfied {
    /// `K ≥ 256 lnN / γ`.
    pub rho1: bool,
    pub case1: bool,
    pub case2: bool,
    pub case3: bool,
    /// The regime containing `(N, K, γ)` has its requirements met.
    pub active_case: bool,
    /// `rho1 && active_case`.
    pub all: bool,
}

/// Every bound evaluated at one `(N, K, γ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    pub gamma: f64,
    pub delta: f64,
    /// `σ²` bound for `L = 1, 2, …` up to `min(N/2, MAX_REPORTED_L)`.
    pub sigma_sq_bound: Vec<f64>,
    /// `2N / N³²`.
    pub rho1: LogProb,
    /// Only an order bound is available for ρ₂.
    pub rho2_order: String,
    /// `1 / (2^{2N} N^{3/2})`, the explicit per-block value standing in for ρ₂.
    pub rho2_standin: LogProb,
    /// `2 / N^{4L}` for `L = 1, 2, …` up to `min(N/2, MAX_REPORTED_L)`.
    pub rho3: Vec<LogProb>,
    /// `C(N,L)² ρ₃^L / (1 − 2(N−L)/N³²)` for the same `L` range.
    pub rho3_terms: Vec<LogProb>,
    /// `Σ_{L=1}^{N/2}` of the ρ₃ terms, over every `L`.
    pub rho3_sum: LogProb,
    /// `2^{2N} ρ₂ / (1 − 2L/N³²)` with the stand-in ρ₂ and `L = N/2`.
    pub rho2_term: LogProb,
    /// `ρ₁ + ρ₂ term + ρ₃ sum`.
    pub union_bound: LogProb,
    pub required_k: RequiredK,
    pub active_case: Regime,
    pub satisfied: Satisfied,
    pub log_convention: String,
}

/// `ln(1 − x)` for tiny `x` given as `ln x`.
fn ln_one_minus(ln_x: f64) -> f64 {
    (-ln_x.exp()).ln_1p()
}

fn ln_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Evaluates the union bound over bad nodes, large-deviation histories and
/// per-cut score failures, and flags which hypotheses hold.
pub fn failure_budget(n: usize, k: usize, gamma: f64) -> Result<BoundReport> {
    let d = delta(n, k)?;
    let req = required_k(n, gamma)?;
    let nf = n as f64;
    let ln_n = nf.ln();
    let ln2 = std::f64::consts::LN_2;
    let ln_bad = -BAD_NODE_EXPONENT * ln_n;
    let max_l = n / 2;
    let reported = max_l.min(MAX_REPORTED_L);

    let sigma = (1..=reported)
        .map(|l| sigma_sq_bound(n, l, k, gamma, d))
        .collect::<Result<Vec<_>>>()?;

    let rho1 = LogProb::from_ln((2.0 * nf).ln() + ln_bad);
    let rho2_standin = LogProb::from_ln(-2.0 * nf * ln2 - 1.5 * ln_n);
    let rho2_term = LogProb::from_ln(
        2.0 * nf * ln2 + rho2_standin.ln - ln_one_minus((2.0 * max_l as f64).ln() + ln_bad),
    );

    let mut rho3 = Vec::with_capacity(reported);
    let mut rho3_terms = Vec::with_capacity(reported);
    let mut ln_sum = f64::NEG_INFINITY;
    let mut ln_binom = 0.0;
    for l in 1..=max_l {
        ln_binom += ((n - l + 1) as f64).ln() - (l as f64).ln();
        let ln_rho3 = 2f64.ln() - 4.0 * l as f64 * ln_n;
        let correction = ln_one_minus((2.0 * (n - l) as f64).ln() + ln_bad);
        let ln_term = 2.0 * ln_binom + ln_rho3 - correction;
        ln_sum = ln_add(ln_sum, ln_term);
        if l <= reported {
            rho3.push(LogProb::from_ln(ln_rho3));
            rho3_terms.push(LogProb::from_ln(ln_term));
        } else if ln_term < ln_sum - 80.0 {
            // Terms shrink geometrically from here on.
            break;
        }
    }
    let rho3_sum = LogProb::from_ln(ln_sum);
    let union_bound = LogProb::from_ln(ln_add(ln_add(rho1.ln, rho2_term.ln), rho3_sum.ln));

    let active_case = req.regime(k);
    let rho1_ok = k as f64 >= req.rho1_k;
    let active_ok = req.meets(active_case, k);
    let satisfied = Satisfied {
        rho1: rho1_ok,
        case1: req.satisfied(Regime::Case1, k),
        case2: req.satisfied(Regime::Case2, k),
        case3: req.satisfied(Regime::Case3, k),
        active_case: active_ok,
        all: rho1_ok && active_ok,
    };

    Ok(BoundReport {
        n,
        k,
        gamma,
        delta: d,
        sigma_sq_bound: sigma,
        rho1,
        rho2_order: "O(1/(2^{2N} poly(N)))".into(),
        rho2_standin,
        rho3,
        rho3_terms,
        rho3_sum,
        rho2_term,
        union_bound,
        required_k: req,
        active_case,
        satisfied,
        log_convention: LOG_CONVENTION.into(),
    })
}

impl BoundReport {
    /// Human-readable aligned summary.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let r = &self.required_k;
        let yes = |b: bool| if b { "true" } else { "false" };
        let mut s = String::new();
        let _ = writeln!(s, "N = {}  K = {}  gamma = {}", self.n, self.k, self.gamma);
        let _ = writeln!(s, "log convention      {}", self.log_convention);
        let _ = writeln!(s, "delta               {:.6}", self.delta);
        if let Some(s1) = self.sigma_sq_bound.first() {
            let _ = writeln!(s, "sigma_sq_bound[L=1] {s1:.6}");
        }
        let _ = writeln!(s, "active case         {}", self.active_case.number());
        let _ = writeln!(
            s,
            "required_K rho1     {:>14.2}  satisfied={}",
            r.rho1_k,
            yes(self.satisfied.rho1)
        );
        let _ = writeln!(
            s,
            "required_K Case-1   {:>14.2}  (KN form; implies K >= {:.1})  in_case={} satisfied={}",
            r.case1_k,
            r.case1_implied_k,
            yes(r.case1_active),
            yes(r.meets(Regime::Case1, self.k))
        );
        let _ = writeln!(
            s,
            "required_K Case-2   {:>14.2}  (K >= {:.1}, KN form {:.1})  in_case={} satisfied={}",
            r.threshold(Regime::Case2),
            r.case2_k,
            r.case2_kn_k,
            yes(self.active_case == Regime::Case2),
            yes(r.meets(Regime::Case2, self.k))
        );
        let _ = writeln!(
            s,
            "required_K Case-3   {:>14.2}  in_case={} satisfied={}",
            r.case3_k,
            yes(self.active_case == Regime::Case3),
            yes(r.meets(Regime::Case3, self.k))
        );
        let _ = writeln!(s, "rho1                {:.6e}", self.rho1.value);
        let _ = writeln!(
            s,
            "rho2                {} (stand-in {:.6e})",
            self.rho2_order, self.rho2_standin.value
        );
        if let Some(r3) = self.rho3.first() {
            let _ = writeln!(s, "rho3[L=1]           {:.6e}", r3.value);
        }
        let _ = writeln!(s, "rho3 union sum      {:.6e}", self.rho3_sum.value);
        let _ = writeln!(s, "union bound         {:.6e}", self.union_bound.value);
        let _ = writeln!(s, "hypotheses hold     {}", yes(self.satisfied.all));
        s
    }
}

/// Result of a Hoeffding bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub value: f64,
    /// All ranges had zero width, so the sum is constant.
    pub degenerate: bool,
}

/// One-sided Hoeffding bound on `P(X̄ − μ ≥ t)` for the mean of
/// independent variables with the given range widths:
/// `exp(−2K²t² / Σ wᵢ²)`.
pub fn hoeffding_tail(t: f64, widths: &[f64]) -> Result<TailBound> {
    if t.is_nan() || t <= 0.0 {
        return Err(MixcutError::OutOfRange(format!(
            "t must be positive, got {t}"
        )));
    }
    if widths.is_empty() || widths.iter().any(|w| w.is_nan() || *w < 0.0) {
        return Err(MixcutError::OutOfRange(
            "widths must be a non-empty list of nonnegative values".into(),
        ));
    }
    let sum_sq: f64 = widths.iter().map(|w| w * w).sum();
    if sum_sq == 0.0 {
        return Ok(TailBound {
            value: 0.0,
            degenerate: true,
        });
    }
    let k = widths.len() as f64;
    Ok(TailBound {
        value: (-2.0 * k * k * t * t / sum_sq).exp(),
        degenerate: false,
    })
}

/// One-sided two-sample Hoeffding bound on
/// `P(Ȳ − Z̄ − (E Ȳ − E Z̄) ≥ t)` for samples of sizes `m` and `n` in an
/// interval of width `width`: `exp(−2t² / ((1/m + 1/n) width²))`.
pub fn hoeffding_two_sample(t: f64, m: usize, n: usize, width: f64) -> Result<TailBound> {
    if t.is_nan() || t <= 0.0 {
        return Err(MixcutError::OutOfRange(format!(
            "t must be positive, got {t}"
        )));
    }
    if m == 0 || n == 0 || width.is_nan() || width < 0.0 {
        return Err(MixcutError::OutOfRange(
            "sample sizes must be positive and width nonnegative".into(),
        ));
    }
    if width == 0.0 {
        return Ok(TailBound {
            value: 0.0,
            degenerate: true,
        });
    }
    let inv = 1.0 / m as f64 + 1.0 / n as f64;
    Ok(TailBound {
        value: (-2.0 * t * t / (inv * width * width)).exp(),
        degenerate: false,
    })
}

/// Two-sided tail for a per-dimension swap imbalance deviating by
/// `t_k √L`: twice the two-sample bound with `m = n = L`, equal to
/// `2 e^{−t_k²}` for every `L`.
pub fn swap_imbalance_tail(t_k: f64, l: usize) -> Result<f64> {
    if t_k == 0.0 {
        return Ok(1.0f64.min(2.0));
    }
    let lf = l as f64;
    Ok(2.0 * hoeffding_two_sample(t_k.abs() / lf.sqrt(), l, l, 1.0)?.value)
}

/// The relaxed per-dimension tail `2 e^{−t²}`.
pub fn relaxed_dimension_tail(t_k: f64) -> f64 {
    2.0 * (-t_k * t_k).exp()
}

/// The per-block tail `2 e^{−β²/4}` used for power-of-two rounded deviations.
pub fn block_dimension_tail(beta: f64) -> f64 {
    2.0 * (-beta * beta / 4.0).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn delta_examples() {
        let ln2 = std::f64::consts::LN_2;
        let d = delta(4, 10).unwrap();
        let oracle = 32.0 * ln2 + 40.0 * ln2 * 2.0 + 1.5 * 4f64.ln();
        assert!(close(d, oracle, 1e-12));
        assert!((d - 79.71).abs() < 0.01);
        let d1 = delta(4, 1).unwrap();
        assert!((d1 - 29.81).abs() < 0.01);
        assert!(delta(3, 10).is_err());
        assert!(delta(4, 0).is_err());
        assert!(delta(5, 10).unwrap() > d);
        assert!(delta(4, 11).unwrap() > d);
    }

    #[test]
    fn sigma_examples() {
        let s = sigma_sq_bound(4, 1, 10, 0.1, 79.71).unwrap();
        assert!(close(s, 12.0 + 956.52, 1e-12));
        assert!(sigma_sq_bound(4, 0, 10, 0.1, 79.71).is_err());
        assert!(sigma_sq_bound(4, 3, 10, 0.1, 79.71).is_err());
        assert!(sigma_sq_bound(4, 1, 10, 0.1, 80.0).unwrap() > s);
    }

    #[test]
    fn required_k_examples() {
        let r = required_k(100, 0.1).unwrap();
        assert!(close(r.case3_k, 188.0 * 100f64.ln() / 0.1, 1e-12));
        // 188 ln 100 / 0.1 = 8657.72, quoted as ≈ 8657.8.
        assert!((r.case3_k - 8657.72).abs() < 0.005);
        let r2 = required_k(100, 0.05).unwrap();
        assert!(close(r2.case2_k, 2.0 * r.case2_k, 1e-12));
        assert!(close(r2.case3_k, 2.0 * r.case3_k, 1e-12));
        let small = required_k(4, 0.2).unwrap();
        assert!(!small.case1_active);
        assert!(close(log_log(4.0) / (2.0 * 0.2), 2.5, 1e-12));
        assert!(matches!(
            required_k(10, 0.0),
            Err(MixcutError::ZeroDivergence)
        ));
        assert!(required_k(3, 0.1).is_err());
    }

    #[test]
    fn regimes() {
        // N = 16, γ = 0.01: log log 16 = 2, boundary 2/(0.02) = 100 ≥ 16.
        let r = required_k(16, 0.01).unwrap();
        assert!(r.case1_active);
        assert_eq!(r.regime(5), Regime::Case1);
        let r = required_k(100, 0.1).unwrap();
        // K log log N / 20 vs N = 100.
        assert_eq!(r.regime(100), Regime::Case3);
        assert_eq!(r.regime(9000), Regime::Case2);
        assert!(r.meets(Regime::Case3, 9000));
        assert!(!r.satisfied(Regime::Case3, 9000));
    }

    #[test]
    fn failure_budget_examples() {
        let rep = failure_budget(10, 1000, 0.1).unwrap();
        let t1 = rep.rho3_terms[0].value;
        assert!(close(t1, 0.02, 1e-6), "{t1}");
        assert!(close(rep.rho3[0].value, 2.0 / 1e4, 1e-12));
        for l in 2..=5 {
            assert!(close(
                rep.rho3[l - 1].value,
                2.0 / 10f64.powi(4 * l as i32),
                1e-9
            ));
        }
        let r4 = failure_budget(4, 10, 0.1).unwrap();
        assert!(close(r4.rho1.value, 8.0 / 4f64.powi(32), 1e-9));
        for n in 4..60 {
            let rep = failure_budget(n, 100, 0.1).unwrap();
            if rep.rho3_terms.len() >= 2 {
                assert!(rep.rho3_terms[1].value < rep.rho3_terms[0].value);
            }
            assert!(rep.union_bound.value >= 0.0);
        }
    }

    #[test]
    fn failure_budget_large_n_stays_finite() {
        let rep = failure_budget(100_000, 10, 0.1).unwrap();
        assert!(rep.rho1.ln.is_finite());
        assert!(close(
            rep.rho1.ln,
            (2e5f64).ln() - 32.0 * 1e5f64.ln(),
            1e-12
        ));
        let huge = failure_budget(1 << 20, 10, 0.1).unwrap();
        assert_eq!(huge.rho3[63].value, 0.0);
        assert!(huge.rho3[63].ln.is_finite());
        assert_eq!(rep.rho3.len(), MAX_REPORTED_L);
        assert!(rep.union_bound.ln.is_finite());
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"delta\""));
    }

    #[test]
    fn bad_node_examples() {
        let same = MixtureModel::homogeneous(5, 0.3, 0.3).unwrap();
        for bits in [[0u8, 0, 0, 0, 0], [1, 1, 1, 1, 1], [1, 0, 1, 0, 0]] {
            let z = BitVector::from_bits(&bits);
            assert!(!is_bad_node(&z, &same, Component::One).unwrap());
            assert!(!is_bad_node(&z, &same, Component::Two).unwrap());
        }
        let m = MixtureModel::new(vec![0.9, 0.2, 0.6], vec![0.1, 0.7, 0.6]).unwrap();
        let best_one = BitVector::from_bits(&[1, 0, 0]);
        assert!(!is_bad_node(&best_one, &m, Component::One).unwrap());
        let best_two = BitVector::from_bits(&[0, 1, 0]);
        assert!(!is_bad_node(&best_two, &m, Component::Two).unwrap());
        assert!(is_bad_node(&best_two, &m, Component::One).unwrap());
        assert!(is_bad_node(&BitVector::zeros(2), &m, Component::One).is_err());
        assert_eq!(bad_node_min_k(0.01, 0.1).unwrap(), 369);
    }

    #[test]
    fn eta_orientation() {
        let m = MixtureModel::new(vec![0.1, 0.2], vec![0.9, 0.8]).unwrap();
        let ctx = TheoryContext::new(&m, 8);
        let kg = ctx.k as f64 * ctx.gamma;
        assert!(ctx.eta >= kg / 2.0);
        assert!(ctx.components_swapped);
        assert_eq!(ctx.eta + ctx.eta_other(), kg);
        let ctx2 = TheoryContext::new(&m.swapped(), 8);
        assert!(!ctx2.components_swapped);
        assert!(close(ctx2.eta, ctx.eta, 1e-12));
    }

    #[test]
    fn hoeffding_examples() {
        let b = hoeffding_tail(0.1, &[1.0; 100]).unwrap();
        assert!(close(b.value, (-2.0f64).exp(), 1e-12));
        assert!(!b.degenerate);
        let mut prev = 1.0;
        for t in [0.05, 0.1, 0.2, 0.5, 1.0, 3.0] {
            let v = hoeffding_tail(t, &[1.0; 10]).unwrap().value;
            assert!(v < prev);
            prev = v;
        }
        let z = hoeffding_tail(0.3, &[0.0, 0.0]).unwrap();
        assert_eq!(z.value, 0.0);
        assert!(z.degenerate);
        assert!(hoeffding_tail(0.0, &[1.0]).is_err());
        assert!(hoeffding_tail(0.1, &[-1.0]).is_err());

        for l in [1usize, 2, 5, 17] {
            for tk in [0.3, 1.0, 2.5] {
                let v = hoeffding_two_sample(tk / (l as f64).sqrt(), l, l, 1.0)
                    .unwrap()
                    .value;
                assert!(close(v, (-tk * tk).exp(), 1e-12));
                assert!(close(
                    swap_imbalance_tail(tk, l).unwrap(),
                    relaxed_dimension_tail(tk),
                    1e-12
                ));
            }
        }
        assert_eq!(swap_imbalance_tail(0.0, 3).unwrap(), 1.0);
        assert!(close(
            block_dimension_tail(2.0),
            2.0 * (-1.0f64).exp(),
            1e-12
        ));
    }
}
