//! Spacings of Gamma order statistics and simulation-based discordancy tests for upper outliers.
//!
//! * [`gamma`]: the Γ(m, σ) law and seeded variate streams.
//! * [`spacings`]: the closed-form density of `X_(2) - X_(1)` for integer shape,
//!   its mixture decomposition, quadrature for arbitrary spacings, and the
//!   `Γ(m, σ/(n-j+1))` law assumed in earlier work (exact only for m = 1).
//! * [`statistics`]: `Z_k`, Dixon's `D_k` and sample spacings.
//! * [`montecarlo`]: null distributions, critical values, p-values and power by simulation.
//! * [`gof`]: Kolmogorov-Smirnov tests and histograms.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod gamma;
pub mod gof;
pub mod montecarlo;
pub mod quadrature;
pub mod spacings;
pub mod special;
pub mod statistics;

pub use error::{Error, Result};
pub use gamma::{gamma_cdf, gamma_pdf, gamma_sample, gamma_sf, GammaParams, RngStream};
pub use gof::{
    ecdf, histogram, ks_pvalue, ks_statistic, ks_test, Histogram, KsResult, MonotoneCdf,
};
pub use montecarlo::{
    critical_value, discordancy_test, p_value, simulate_power, simulate_spacing,
    simulate_statistic, Decision, EmpiricalSample, Execution, SimulationConfig,
    SlippageAlternative, TestReport,
};
pub use spacings::{
    claimed_pdf_yj, density_curve, spacing_cdf_numeric, spacing_pdf_numeric, y2_mixture,
    y2_pdf_exact, DensityCurve, MixtureDecomposition, SpacingDensity, SpacingIndex,
};
pub use special::log_gamma;
pub use statistics::{
    dixon_dk, dixon_dk_refuted, spacings_from_sample, z_k, z_k_telescoped, SampleData, Statistic,
    StatisticConfig,
};
