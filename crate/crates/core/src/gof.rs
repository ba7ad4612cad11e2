//! Goodness of fit: empirical cdf, one-sample Kolmogorov-Smirnov test against a
//! fully specified cdf, area-normalized histograms, and a monotone tabulated cdf
//! for distribution functions that are expensive to evaluate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fraction of `sorted` values `<= x`.
pub fn ecdf(sorted: &[f64], x: f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::EmptySample);
    }
    let count = sorted.partition_point(|&v| v <= x);
    Ok(count as f64 / sorted.len() as f64)
}

fn check_sorted(sample: &[f64]) -> Result<()> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if sample.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidParameter(
            "KS sample must be sorted and free of NaN".into(),
        ));
    }
    Ok(())
}

/// Kolmogorov-Smirnov distance `D` between the sample's ECDF and a fallible `cdf`.
pub fn try_ks_statistic<F>(sorted: &[f64], mut cdf: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    check_sorted(sorted)?;
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let c = cdf(x)?;
        let above = (i + 1) as f64 / n - c;
        let below = c - i as f64 / n;
        d = d.max(above).max(below);
    }
    Ok(d.clamp(0.0, 1.0))
}

/// Kolmogorov-Smirnov distance `D = max_i max(i/N - F(x_(i)), F(x_(i)) - (i-1)/N)`.
pub fn ks_statistic<F>(sorted: &[f64], mut cdf: F) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_ks_statistic(sorted, |x| Ok(cdf(x)))
}

/// Asymptotic Kolmogorov tail probability `Q(λ)`.
fn kolmogorov_tail(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Dual theta-function form; the alternating series converges poorly here.
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let scale = (2.0 * std::f64::consts::PI).sqrt() / lambda;
        let mut sum = 0.0;
        for k in 1..=100 {
            let odd = (2 * k - 1) as f64;
            let term = (-odd * odd * pi2 / (8.0 * lambda * lambda)).exp();
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        return 1.0 - scale * sum;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-12 {
            break;
        }
        sign = -sign;
    }
    2.0 * sum
}

/// Kolmogorov p-value for distance `d` at sample size `n_sample`, using the
/// effective argument `λ = (√N + 0.12 + 0.11/√N) d`. Never returns exactly 0.
pub fn ks_pvalue(d: f64, n_sample: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::Domain(format!(
            "KS distance must lie in [0, 1], got {d}"
        )));
    }
    if n_sample == 0 {
        return Err(Error::Domain("KS sample size must be at least 1".into()));
    }
    let root = (n_sample as f64).sqrt();
    let lambda = (root + 0.12 + 0.11 / root) * d;
    Ok(kolmogorov_tail(lambda).clamp(f64::MIN_POSITIVE, 1.0))
}

/// Outcome of a one-sample KS test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub sample_size: usize,
}

impl KsResult {
    pub fn rejects_at(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

pub fn ks_test<F: FnMut(f64) -> f64>(sorted: &[f64], cdf: F) -> Result<KsResult> {
    let statistic = ks_statistic(sorted, cdf)?;
    Ok(KsResult {
        statistic,
        p_value: ks_pvalue(statistic, sorted.len())?,
        sample_size: sorted.len(),
    })
}

pub fn try_ks_test<F: FnMut(f64) -> Result<f64>>(sorted: &[f64], cdf: F) -> Result<KsResult> {
    let statistic = try_ks_statistic(sorted, cdf)?;
    Ok(KsResult {
        statistic,
        p_value: ks_pvalue(statistic, sorted.len())?,
        sample_size: sorted.len(),
    })
}

/// A cdf tabulated on a grid, forced nondecreasing and into `[0, 1]`, read back by
/// linear interpolation. Outside the grid the end values are held.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCdf {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl MonotoneCdf {
    pub fn from_table(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() || grid.len() < 2 {
            return Err(Error::InvalidParameter(
                "cdf table needs equal-length grid and values with at least 2 points".into(),
            ));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(
                "cdf grid must be strictly increasing".into(),
            ));
        }
        let mut running = 0.0f64;
        let values = values
            .into_iter()
            .map(|v| {
                running = running.max(if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) });
                running
            })
            .collect();
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: FnMut(f64) -> Result<f64>>(grid: Vec<f64>, mut cdf: F) -> Result<Self> {
        let values = grid.iter().map(|&x| cdf(x)).collect::<Result<Vec<_>>>()?;
        Self::from_table(grid, values)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let last = self.grid.len() - 1;
        if x <= self.grid[0] {
            return self.values[0];
        }
        if x >= self.grid[last] {
            return self.values[last];
        }
        let hi = self.grid.partition_point(|&g| g <= x);
        let lo = hi - 1;
        let t = (x - self.grid[lo]) / (self.grid[hi] - self.grid[lo]);
        self.values[lo] + t * (self.values[hi] - self.values[lo])
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Area-normalized histogram with uniform bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub densities: Vec<f64>,
    /// Observations that fell inside the range.
    pub count: usize,
    /// Observations outside an explicit range.
    pub dropped: usize,
}

impl Histogram {
    pub fn bin_width(&self) -> f64 {
        (self.bin_edges[self.bin_edges.len() - 1] - self.bin_edges[0]) / self.densities.len() as f64
    }

    /// Writes `bin_lo,bin_hi,density` rows with a header line.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "bin_lo,bin_hi,density")?;
        for (edge, d) in self.bin_edges.windows(2).zip(&self.densities) {
            writeln!(out, "{},{},{}", edge[0], edge[1], d)?;
        }
        Ok(())
    }
}

/// Bins `sample` into `bins` equal-width bins over `range` (default: sample min to max).
pub fn histogram(sample: &[f64], bins: usize, range: Option<(f64, f64)>) -> Result<Histogram> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if bins == 0 {
        return Err(Error::InvalidParameter(
            "histogram needs at least one bin".into(),
        ));
    }
    let (lo, hi) = match range {
        Some((lo, hi)) => {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidParameter(format!(
                    "histogram range must satisfy lo < hi, got ({lo}, {hi})"
                )));
            }
            (lo, hi)
        }
        None => {
            let lo = sample.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = sample.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::InvalidParameter(
                    "sample contains non-finite values".into(),
                ));
            }
            if lo == hi {
                (lo - 0.5, hi + 0.5)
            } else {
                (lo, hi)
            }
        }
    };
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    let mut dropped = 0;
    for &x in sample {
        if !(x >= lo && x <= hi) {
            dropped += 1;
            continue;
        }
        let idx = (((x - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let count = sample.len() - dropped;
    let bin_edges = (0..=bins)
        .map(|i| if i == bins { hi } else { lo + width * i as f64 })
        .collect();
    let densities = counts
        .iter()
        .map(|&c| {
            if count == 0 {
                0.0
            } else {
                c as f64 / (count as f64 * width)
            }
        })
        .collect();
    Ok(Histogram {
        bin_edges,
        densities,
        count,
        dropped,
    })
}
