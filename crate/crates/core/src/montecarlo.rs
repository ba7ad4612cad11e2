//! Seeded Monte Carlo for spacings and outlier statistics.
//!
//! Replication `r` always draws from `RngStream::new(seed, r)`, so results do not
//! depend on the number of worker threads or on scheduling. Replications of the
//! slippage alternative use a disjoint block of stream indices.
//!
//! Rejection is in the upper tail for both `Z_k` and `D_k`. Critical values use
//! the inverted-ECDF quantile and p-values carry the add-one correction.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{GammaParams, GammaSampler, RngStream};
use crate::statistics::{SampleData, Statistic, StatisticConfig};

/// First stream index used for alternative-hypothesis replications.
const ALTERNATIVE_STREAM_BASE: u64 = 1 << 63;

/// Redraw limit for a replication that produces an all-equal sample.
const MAX_REDRAWS: usize = 1000;

/// How replications are scheduled. Output is identical either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Parameters of a simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub n: usize,
    pub m: f64,
    pub sigma: f64,
    pub reps: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip)]
    pub execution: Execution,
}

impl SimulationConfig {
    pub fn new(n: usize, m: f64, sigma: f64, reps: usize, seed: u64) -> Result<Self> {
        let cfg = Self {
            n,
            m,
            sigma,
            reps,
            seed,
            k: None,
            execution: Execution::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_k(mut self, k: usize) -> Result<Self> {
        self.k = Some(k);
        self.validate()?;
        Ok(self)
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!(
                "sample size n must be >= 2, got {}",
                self.n
            )));
        }
        if self.reps == 0 {
            return Err(Error::InvalidParameter(
                "replication count must be at least 1".into(),
            ));
        }
        GammaParams::new(self.m, self.sigma)?;
        if let Some(k) = self.k {
            if k == 0 || k >= self.n {
                return Err(Error::InvalidParameter(format!(
                    "number of suspected outliers must satisfy 1 <= k < n, got k={k} with n={}",
                    self.n
                )));
            }
        }
        Ok(())
    }

    pub fn params(&self) -> Result<GammaParams> {
        GammaParams::new(self.m, self.sigma)
    }

    fn required_k(&self) -> Result<usize> {
        self.k.ok_or_else(|| {
            Error::InvalidParameter(
                "this simulation needs the number of suspected outliers k".into(),
            )
        })
    }
}

/// Sorted simulated values of one statistic, with the configuration that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSample {
    pub config: SimulationConfig,
    pub statistic_name: String,
    pub sorted: bool,
    pub values: Vec<f64>,
}

impl EmpiricalSample {
    fn finalize(config: SimulationConfig, statistic_name: String, mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self {
            config,
            statistic_name,
            sorted: true,
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        let n = self.values.len() as f64;
        if n < 2.0 {
            return f64::NAN;
        }
        let mean = self.mean();
        let var = self.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    }

    /// Writes the configuration as `#` comments, a `value` header, then one value per line.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        let c = &self.config;
        writeln!(out, "# statistic: {}", self.statistic_name)?;
        writeln!(out, "# n: {}", c.n)?;
        writeln!(out, "# m: {}", c.m)?;
        writeln!(out, "# sigma: {}", c.sigma)?;
        if let Some(k) = c.k {
            writeln!(out, "# k: {k}")?;
        }
        writeln!(out, "# reps: {}", c.reps)?;
        writeln!(out, "# seed: {}", c.seed)?;
        writeln!(out, "value")?;
        for v in &self.values {
            writeln!(out, "{v}")?;
        }
        Ok(())
    }
}

fn replicate<T, F>(reps: usize, execution: Execution, job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    match execution {
        Execution::Sequential => (0..reps as u64).map(job).collect(),
        Execution::Parallel => (0..reps as u64).into_par_iter().map(job).collect(),
    }
}

/// Simulates `R` copies of the spacing `Y_j = X_(j) - X_(j-1)` from Γ(m, σ) samples of size `n`.
pub fn simulate_spacing(cfg: &SimulationConfig, j: usize) -> Result<EmpiricalSample> {
    cfg.validate()?;
    if j < 2 || j > cfg.n {
        return Err(Error::InvalidParameter(format!(
            "spacing index must satisfy 2 <= j <= n, got j={j} with n={}",
            cfg.n
        )));
    }
    let sampler = GammaSampler::new(cfg.params()?);
    let n = cfg.n;
    let values = replicate(cfg.reps, cfg.execution, |r| {
        let mut rng = RngStream::new(cfg.seed, r).rng();
        let mut x = vec![0.0; n];
        sampler.fill(&mut rng, &mut x);
        x.sort_by(f64::total_cmp);
        Ok(x[j - 1] - x[j - 2])
    })?;
    Ok(EmpiricalSample::finalize(*cfg, format!("y{j}"), values))
}

/// Draws one sample (`n - contaminated` null draws followed by `contaminated`
/// draws scaled by `factor`) and evaluates `which`, redrawing degenerate samples.
fn draw_statistic(
    stream: RngStream,
    null: &GammaSampler,
    n: usize,
    contaminated: usize,
    factor: f64,
    which: Statistic,
    k: usize,
) -> Result<f64> {
    let mut rng = stream.rng();
    let mut x = vec![0.0; n];
    for _ in 0..MAX_REDRAWS {
        null.fill(&mut rng, &mut x);
        for v in &mut x[n - contaminated..] {
            *v *= factor;
        }
        x.sort_by(f64::total_cmp);
        match which.evaluate_sorted(&x, k) {
            Ok(v) => return Ok(v),
            Err(Error::DegenerateSample(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateSample(format!(
        "stream {} produced {MAX_REDRAWS} degenerate samples in a row",
        stream.stream_index
    )))
}

/// Simulates the null distribution of `Z_k` or `D_k` for i.i.d. Γ(m, σ) samples.
///
/// Both statistics are scale-free, so draws are made at unit scale and the
/// result does not depend on σ.
pub fn simulate_statistic(cfg: &SimulationConfig, which: Statistic) -> Result<EmpiricalSample> {
    cfg.validate()?;
    let k = cfg.required_k()?;
    let sampler = GammaSampler::new(GammaParams::standard(cfg.m)?);
    let values = replicate(cfg.reps, cfg.execution, |r| {
        draw_statistic(
            RngStream::new(cfg.seed, r),
            &sampler,
            cfg.n,
            0,
            1.0,
            which,
            k,
        )
    })?;
    Ok(EmpiricalSample::finalize(
        *cfg,
        which.label().to_string(),
        values,
    ))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "significance level must lie in (0, 1), got {alpha}"
        )))
    }
}

fn check_finalized(sample: &EmpiricalSample) -> Result<()> {
    if sample.values.is_empty() {
        return Err(Error::EmptySample);
    }
    if !sample.sorted {
        return Err(Error::InvalidParameter(
            "empirical sample is not finalized".into(),
        ));
    }
    Ok(())
}

/// Empirical `(1 - α)` quantile: the value at 1-based index `⌈(1 - α) R⌉` of the sorted sample.
pub fn critical_value(sample: &EmpiricalSample, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_finalized(sample)?;
    let reps = sample.values.len();
    // ⌈(1-α)R⌉ = R - ⌊αR⌋, with αR snapped to an integer when rounding put it just below one.
    let scaled = alpha * reps as f64;
    let mut floor = scaled.floor();
    if scaled - floor > 1.0 - 1e-9 {
        floor += 1.0;
    }
    let index = reps.saturating_sub(floor as usize).max(1);
    Ok(sample.values[index - 1])
}

/// Upper-tail p-value `(1 + #{values >= observed}) / (1 + R)`.
pub fn p_value(sample: &EmpiricalSample, observed: f64) -> Result<f64> {
    check_finalized(sample)?;
    let reps = sample.values.len();
    let below = sample.values.partition_point(|&v| v < observed);
    Ok((1 + reps - below) as f64 / (1 + reps) as f64)
}

/// Scale slippage: `contaminated_count` of the `n` observations come from Γ(m, b σ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlippageAlternative {
    pub contaminated_count: usize,
    pub scale_factor: f64,
}

impl SlippageAlternative {
    /// `scale_factor = 1` is accepted and reproduces the null.
    pub fn new(contaminated_count: usize, scale_factor: f64) -> Result<Self> {
        if contaminated_count == 0 {
            return Err(Error::InvalidParameter(
                "at least one observation must be contaminated".into(),
            ));
        }
        if !(scale_factor.is_finite() && scale_factor >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "slippage scale factor must be finite and >= 1, got {scale_factor}"
            )));
        }
        Ok(Self {
            contaminated_count,
            scale_factor,
        })
    }
}

/// Fraction of alternative replications whose statistic exceeds the null critical value at `alpha`.
///
/// The statistic is the one that produced `null_sample`.
pub fn simulate_power(
    cfg: &SimulationConfig,
    alt: SlippageAlternative,
    alpha: f64,
    null_sample: &EmpiricalSample,
) -> Result<f64> {
    cfg.validate()?;
    let k = cfg.required_k()?;
    if alt.contaminated_count != k {
        return Err(Error::ConfigMismatch(format!(
            "contaminated count {} differs from suspected outlier count k={k}",
            alt.contaminated_count
        )));
    }
    let null_cfg = &null_sample.config;
    if null_cfg.n != cfg.n || null_cfg.m != cfg.m || null_cfg.k != cfg.k {
        return Err(Error::ConfigMismatch(format!(
            "null sample was generated with (n={}, m={}, k={:?}) but power run uses (n={}, m={}, k={:?})",
            null_cfg.n, null_cfg.m, null_cfg.k, cfg.n, cfg.m, cfg.k
        )));
    }
    let which: Statistic = null_sample.statistic_name.parse().map_err(|_| {
        Error::ConfigMismatch(format!(
            "'{}' is not a test statistic",
            null_sample.statistic_name
        ))
    })?;
    SlippageAlternative::new(alt.contaminated_count, alt.scale_factor)?;
    let threshold = critical_value(null_sample, alpha)?;
    let sampler = GammaSampler::new(GammaParams::standard(cfg.m)?);
    let rejections = replicate(cfg.reps, cfg.execution, |r| {
        let stream = RngStream::new(cfg.seed, ALTERNATIVE_STREAM_BASE + r);
        let v = draw_statistic(stream, &sampler, cfg.n, k, alt.scale_factor, which, k)?;
        Ok(v > threshold)
    })?;
    Ok(rejections.iter().filter(|&&hit| hit).count() as f64 / cfg.reps as f64)
}

/// Binomial standard error of an estimated rate from `reps` replications.
pub fn rate_std_error(rate: f64, reps: usize) -> f64 {
    (rate * (1.0 - rate) / reps as f64).sqrt()
}

/// Verdict of a discordancy test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    #[serde(rename = "discordant")]
    Discordant,
    #[serde(rename = "not discordant")]
    NotDiscordant,
}

impl Decision {
    pub fn is_discordant(&self) -> bool {
        matches!(self, Decision::Discordant)
    }
}

/// Outcome of testing observed data against a simulated null.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub statistic_name: String,
    pub statistic: f64,
    pub p_value: f64,
    pub critical_value: f64,
    pub alpha: f64,
    pub decision: Decision,
    pub config: SimulationConfig,
}

/// Evaluates `which` on `data`, simulates its null under `cfg` and declares the
/// top `k` observations discordant when the statistic exceeds the critical value
/// at `alpha`. `cfg.n` must equal the sample size and `cfg.k` must be set.
pub fn discordancy_test(
    data: &SampleData,
    which: Statistic,
    cfg: &SimulationConfig,
    alpha: f64,
) -> Result<TestReport> {
    check_alpha(alpha)?;
    let k = cfg.required_k()?;
    if cfg.n != data.len() {
        return Err(Error::ConfigMismatch(format!(
            "null configured for n={} but the data has {} observations",
            cfg.n,
            data.len()
        )));
    }
    let observed = which.evaluate(data, StatisticConfig::new(k))?;
    let null = simulate_statistic(cfg, which)?;
    let critical = critical_value(&null, alpha)?;
    let decision = if observed > critical {
        Decision::Discordant
    } else {
        Decision::NotDiscordant
    };
    Ok(TestReport {
        statistic_name: which.label().to_string(),
        statistic: observed,
        p_value: p_value(&null, observed)?,
        critical_value: critical,
        alpha,
        decision,
        config: *cfg,
    })
}
