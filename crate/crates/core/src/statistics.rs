//! Upper-outlier statistics computed from a sample: spacings, `Z_k` and Dixon's `D_k`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Observations `X_1..X_n` in their original order plus a sorted view.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleData {
    values: Vec<f64>,
    sorted: Vec<f64>,
}

impl SampleData {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "a sample needs at least 2 observations, got {}",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "observations must be finite, got {bad}"
            )));
        }
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { values, sorted })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Raw observation order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Order statistics `X_(1) <= ... <= X_(n)`.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }
}

/// Number of suspected upper outliers. Checked against the sample size at evaluation time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatisticConfig {
    pub k: usize,
}

impl StatisticConfig {
    pub fn new(k: usize) -> Self {
        Self { k }
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.k >= 1 && self.k < n {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "number of suspected outliers must satisfy 1 <= k < n, got k={} with n={n}",
                self.k
            )))
        }
    }
}

/// Consecutive spacings `Y_2..Y_n` of the sorted sample.
pub fn spacings_from_sample(data: &SampleData) -> Vec<f64> {
    data.sorted().windows(2).map(|w| w[1] - w[0]).collect()
}

/// `Z_k` on already sorted values.
pub(crate) fn z_k_sorted(sorted: &[f64], k: usize) -> Result<f64> {
    let n = sorted.len();
    // Weighted spacings t·Y_{n-t+1}, t = 1..n-1, summed from the top so that the
    // numerator is a prefix of the denominator.
    let mut numerator = 0.0;
    let mut denominator = 0.0;
    for t in 1..n {
        let spacing = sorted[n - t] - sorted[n - t - 1];
        denominator += t as f64 * spacing;
        if t == k {
            numerator = denominator;
        }
    }
    if !(denominator > 0.0) {
        return Err(Error::DegenerateSample("all observations are equal".into()));
    }
    Ok(numerator / denominator)
}

/// `Z_k = Σ_{j>n-k} (n-j+1) Y_j / Σ_{j>=2} (n-j+1) Y_j`; large values point to upper outliers.
pub fn z_k(data: &SampleData, cfg: StatisticConfig) -> Result<f64> {
    cfg.check(data.len())?;
    z_k_sorted(data.sorted(), cfg.k)
}

/// `Z_k` rewritten by summation by parts: `(Σ_{j>n-k} X_(j) - k X_(n-k)) / (Σ X_i - n X_(1))`.
pub fn z_k_telescoped(data: &SampleData, cfg: StatisticConfig) -> Result<f64> {
    let n = data.len();
    cfg.check(n)?;
    let k = cfg.k;
    let x = data.sorted();
    let top: f64 = x[n - k..].iter().sum();
    let numerator = top - k as f64 * x[n - k - 1];
    let total: f64 = data.values().iter().sum();
    let denominator = total - n as f64 * x[0];
    if x[n - 1] == x[0] {
        return Err(Error::DegenerateSample("all observations are equal".into()));
    }
    Ok(numerator / denominator)
}

pub(crate) fn dixon_dk_sorted(sorted: &[f64], k: usize) -> Result<f64> {
    let n = sorted.len();
    let range = sorted[n - 1] - sorted[0];
    if !(range > 0.0) {
        return Err(Error::DegenerateSample("sample range is zero".into()));
    }
    Ok((sorted[n - 1] - sorted[n - k - 1]) / range)
}

/// Dixon's gap-to-range ratio `(X_(n) - X_(n-k)) / (X_(n) - X_(1))`.
pub fn dixon_dk(data: &SampleData, cfg: StatisticConfig) -> Result<f64> {
    cfg.check(data.len())?;
    dixon_dk_sorted(data.sorted(), cfg.k)
}

/// `(X_(n) - X_(n-k)) / X_(n)`, an incorrect form of Dixon's statistic that depends on location.
///
/// Only for demonstrating the difference from [`dixon_dk`].
pub fn dixon_dk_refuted(data: &SampleData, cfg: StatisticConfig) -> Result<f64> {
    let n = data.len();
    cfg.check(n)?;
    let x = data.sorted();
    if x[n - 1] == 0.0 {
        return Err(Error::Domain("largest observation is zero".into()));
    }
    Ok((x[n - 1] - x[n - cfg.k - 1]) / x[n - 1])
}

/// Test statistics available for discordancy testing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    Zk,
    Dk,
}

impl Statistic {
    pub fn evaluate(&self, data: &SampleData, cfg: StatisticConfig) -> Result<f64> {
        match self {
            Statistic::Zk => z_k(data, cfg),
            Statistic::Dk => dixon_dk(data, cfg),
        }
    }

    pub(crate) fn evaluate_sorted(&self, sorted: &[f64], k: usize) -> Result<f64> {
        match self {
            Statistic::Zk => z_k_sorted(sorted, k),
            Statistic::Dk => dixon_dk_sorted(sorted, k),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Statistic::Zk => "zk",
            Statistic::Dk => "dk",
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zk" | "z" => Ok(Statistic::Zk),
            "dk" | "d" => Ok(Statistic::Dk),
            other => Err(Error::InvalidParameter(format!(
                "unknown statistic '{other}', expected zk or dk"
            ))),
        }
    }
}
