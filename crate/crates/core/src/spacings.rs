//! Densities of order-statistic spacings `X_(s) - X_(r)` from Gamma samples.
//!
//! Three routes are provided:
//!
//! * the closed form for the single spacing `Y_2 = X_(2) - X_(1)` of a
//!   two-point sample with integer shape, together with its decomposition
//!   into a finite Γ(i + 1, 1) mixture;
//! * adaptive quadrature of the general order-statistic spacing integral,
//!   valid for every `(n, s, r)` and every positive shape;
//! * the law `Γ(m, σ/(n - j + 1))` that earlier work assumed for consecutive
//!   spacings. It is exact only when m = 1 and is kept for comparison.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{gamma_pdf, gamma_pdf_at_zero, gamma_upper_quantile, GammaParams};
use crate::quadrature::{integrate, Quadrature};
use crate::special::{
    compensated_sum, ln_factorial, ln_gamma, regularized_gamma_p, regularized_gamma_q,
};

/// Upper-tail mass ignored when truncating the quadrature range.
const TRUNCATION_TAIL: f64 = 1e-14;

/// Identifies the spacing `X_(s) - X_(r)` of an `n`-sample (1-based order indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpacingIndex {
    n: usize,
    s: usize,
    r: usize,
}

impl SpacingIndex {
    pub fn new(n: usize, s: usize, r: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "sample size n must be >= 2, got {n}"
            )));
        }
        if !(1 <= r && r < s && s <= n) {
            return Err(Error::InvalidParameter(format!(
                "order indices must satisfy 1 <= r < s <= n, got n={n}, s={s}, r={r}"
            )));
        }
        Ok(Self { n, s, r })
    }

    /// The consecutive spacing `Y_j = X_(j) - X_(j-1)`, `2 <= j <= n`.
    pub fn consecutive(n: usize, j: usize) -> Result<Self> {
        if j < 2 || j > n {
            return Err(Error::InvalidParameter(format!(
                "consecutive spacing index must satisfy 2 <= j <= n, got n={n}, j={j}"
            )));
        }
        Self::new(n, j, j - 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// `ln [ n! / ((r-1)! (s-r-1)! (n-s)!) ]`
    fn ln_coefficient(&self) -> f64 {
        let (n, s, r) = (self.n as u64, self.s as u64, self.r as u64);
        ln_factorial(n) - ln_factorial(r - 1) - ln_factorial(s - r - 1) - ln_factorial(n - s)
    }
}

/// Returns `m` as an integer when it is a positive whole number.
pub fn integer_shape(m: f64) -> Result<u64> {
    if m.is_finite() && m >= 1.0 && m.fract() == 0.0 && m <= u32::MAX as f64 {
        Ok(m as u64)
    } else {
        Err(Error::Domain(format!(
            "the closed-form Y_2 density requires a positive integer shape, got m={m}"
        )))
    }
}

/// `ln` of the weight of the Γ(i + 1, 1) component, `(2m-i-2)! / ((m-1-i)! (m-1)! 2^(2m-2-i))`.
fn ln_mixture_weight(m: u64, i: u64) -> f64 {
    ln_factorial(2 * m - i - 2)
        - ln_factorial(m - 1 - i)
        - ln_factorial(m - 1)
        - (2 * m - 2 - i) as f64 * std::f64::consts::LN_2
}

/// `C(2m-2, m-1) / 4^(m-1)`, the weight of the Γ(1, 1) component.
fn density_at_zero(m: u64) -> f64 {
    if m <= 4096 {
        (1..m)
            .map(|i| (2 * i - 1) as f64 / (2 * i) as f64)
            .product()
    } else {
        ln_mixture_weight(m, 0).exp()
    }
}

/// Density of `Y_2 = X_(2) - X_(1)` for two i.i.d. Γ(m, 1) variables, integer `m`.
///
/// Evaluates `e^{-y}/Γ(m)^2 Σ_{i<m} C(m-1, i) Γ(2m-i-1) y^i / 2^{2(m-1)-i}` term by
/// term in log space. At `y = 0` the right-hand limit is returned; negative `y` gives 0.
pub fn y2_pdf_exact(m: f64, y: f64) -> Result<f64> {
    let m = integer_shape(m)?;
    if y.is_nan() {
        return Err(Error::Domain("y must not be NaN".into()));
    }
    if y < 0.0 || y.is_infinite() {
        return Ok(0.0);
    }
    let ln_gm = ln_gamma(m as f64);
    if y == 0.0 {
        return Ok(density_at_zero(m));
    }
    let ln_y = y.ln();
    let terms = (0..m).map(|i| {
        let ln_term = ln_factorial(m - 1) - ln_factorial(i) - ln_factorial(m - 1 - i)
            + ln_gamma((2 * m - i - 1) as f64)
            - (2 * (m - 1) - i) as f64 * std::f64::consts::LN_2
            - 2.0 * ln_gm
            + i as f64 * ln_y
            - y;
        ln_term.exp()
    });
    Ok(compensated_sum(terms))
}

/// The Y_2 law written as a finite mixture of Γ(i + 1, 1) components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureDecomposition {
    pub weights: Vec<f64>,
    pub component_shapes: Vec<u64>,
}

impl MixtureDecomposition {
    pub fn pdf(&self, y: f64) -> f64 {
        if y < 0.0 {
            return 0.0;
        }
        compensated_sum(
            self.weights
                .iter()
                .zip(&self.component_shapes)
                .map(|(&w, &k)| {
                    let p = GammaParams::standard(k as f64).expect("component shapes are positive");
                    if y == 0.0 {
                        w * gamma_pdf_at_zero(p)
                    } else {
                        w * gamma_pdf(y, p)
                    }
                }),
        )
    }

    pub fn cdf(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        let s = compensated_sum(
            self.weights
                .iter()
                .zip(&self.component_shapes)
                .map(|(&w, &k)| w * regularized_gamma_p(k as f64, y)),
        );
        s.clamp(0.0, 1.0)
    }

    pub fn mean(&self) -> f64 {
        compensated_sum(
            self.weights
                .iter()
                .zip(&self.component_shapes)
                .map(|(&w, &k)| w * k as f64),
        )
    }
}

/// Mixture weights of the Y_2 law for integer `m`: component `i` is Γ(i + 1, 1).
pub fn y2_mixture(m: f64) -> Result<MixtureDecomposition> {
    let m = integer_shape(m)?;
    let weights = (0..m).map(|i| ln_mixture_weight(m, i).exp()).collect();
    let component_shapes = (1..=m).collect();
    Ok(MixtureDecomposition {
        weights,
        component_shapes,
    })
}

/// Distribution function of Y_2 for integer `m`, from the mixture form.
pub fn y2_cdf_exact(m: f64, y: f64) -> Result<f64> {
    Ok(y2_mixture(m)?.cdf(y))
}

/// Integrand of the spacing density at lower order-statistic position `x`, unit scale.
struct SpacingIntegrand {
    index: SpacingIndex,
    unit: GammaParams,
    ln_coefficient: f64,
}

impl SpacingIntegrand {
    fn new(index: SpacingIndex, m: f64) -> Self {
        Self {
            index,
            unit: GammaParams::standard(m).expect("shape validated by GammaParams"),
            ln_coefficient: index.ln_coefficient(),
        }
    }

    fn eval(&self, x: f64, y: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let m = self.unit.shape();
        let upper = x + y;
        let below = (self.index.r - 1) as i32;
        let between = (self.index.s - self.index.r - 1) as i32;
        let above = (self.index.n - self.index.s) as i32;

        let f_lo = gamma_pdf(x, self.unit);
        let f_hi = gamma_pdf(upper, self.unit);
        if f_lo == 0.0 || f_hi == 0.0 {
            return 0.0;
        }
        let mut ln_value = self.ln_coefficient + f_lo.ln() + f_hi.ln();

        let cdf_lo = if below > 0 || between > 0 {
            regularized_gamma_p(m, x)
        } else {
            0.0
        };
        if below > 0 {
            if cdf_lo == 0.0 {
                return 0.0;
            }
            ln_value += below as f64 * cdf_lo.ln();
        }
        if between > 0 {
            // Difference taken on whichever side of the median avoids cancellation.
            let mass = if cdf_lo < 0.5 {
                regularized_gamma_p(m, upper) - cdf_lo
            } else {
                regularized_gamma_q(m, x) - regularized_gamma_q(m, upper)
            };
            if mass <= 0.0 {
                return 0.0;
            }
            ln_value += between as f64 * mass.ln();
        }
        if above > 0 {
            let tail = regularized_gamma_q(m, upper);
            if tail == 0.0 {
                return 0.0;
            }
            ln_value += above as f64 * tail.ln();
        }
        ln_value.exp()
    }
}

fn check_tolerance(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "tolerance must be positive and finite, got {tol}"
        )))
    }
}

fn unit_density(integrand: &SpacingIntegrand, z: f64, tol: f64) -> Result<f64> {
    let x_max = gamma_upper_quantile(TRUNCATION_TAIL, integrand.unit)? + z;
    let opts = Quadrature {
        abs_tol: tol,
        initial_pieces: 16,
        ..Quadrature::default()
    };
    let r = integrate(|x| integrand.eval(x, z), 0.0, x_max, opts)?;
    Ok(r.value.max(0.0))
}

/// Density of the spacing `X_(s) - X_(r)` of an i.i.d. Γ(m, σ) sample at `y`, by adaptive quadrature.
///
/// The integral over the lower order statistic runs from 0 to the `1 - 1e-14`
/// quantile plus `y`; the absolute quadrature error is at most `tol`.
pub fn spacing_pdf_numeric(index: SpacingIndex, p: GammaParams, y: f64, tol: f64) -> Result<f64> {
    check_tolerance(tol)?;
    if y.is_nan() {
        return Err(Error::Domain("y must not be NaN".into()));
    }
    if y < 0.0 || y.is_infinite() {
        return Ok(0.0);
    }
    let sigma = p.scale();
    let integrand = SpacingIntegrand::new(index, p.shape());
    // f_σ(y) = f_1(y/σ)/σ, so the unit-scale tolerance is tol·σ.
    Ok(unit_density(&integrand, y / sigma, tol * sigma)? / sigma)
}

fn unit_cdf_segment(
    integrand: &SpacingIntegrand,
    lo: f64,
    hi: f64,
    tol: f64,
    initial_pieces: usize,
) -> Result<f64> {
    let width = (hi - lo).max(f64::MIN_POSITIVE);
    let inner_tol = (tol / (10.0 * width.max(1.0))).max(1e-15);
    let mut failure = None;
    let r = integrate(
        |z| match unit_density(integrand, z, inner_tol) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        lo,
        hi,
        Quadrature {
            initial_pieces,
            ..Quadrature::with_tolerance(tol)
        },
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(r.value),
    }
}

/// Distribution function of the spacing: the integral of [`spacing_pdf_numeric`] over `[0, y]`.
pub fn spacing_cdf_numeric(index: SpacingIndex, p: GammaParams, y: f64, tol: f64) -> Result<f64> {
    check_tolerance(tol)?;
    if y.is_nan() {
        return Err(Error::Domain("y must not be NaN".into()));
    }
    if y <= 0.0 {
        return Ok(0.0);
    }
    if y.is_infinite() {
        return Ok(1.0);
    }
    let integrand = SpacingIntegrand::new(index, p.shape());
    Ok(unit_cdf_segment(
        &integrand,
        0.0,
        y / p.scale(),
        tol,
        Quadrature::default().initial_pieces,
    )?
    .clamp(0.0, 1.0))
}

/// Distribution function tabulated on an increasing grid by accumulating segment integrals.
///
/// The result is clamped to `[0, 1]` and forced nondecreasing.
pub fn spacing_cdf_table(
    index: SpacingIndex,
    p: GammaParams,
    grid: &[f64],
    tol: f64,
) -> Result<Vec<f64>> {
    check_tolerance(tol)?;
    if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.first().is_some_and(|&g| g < 0.0) {
        return Err(Error::InvalidParameter(
            "cdf grid must be nonnegative and strictly increasing".into(),
        ));
    }
    let integrand = SpacingIntegrand::new(index, p.shape());
    let sigma = p.scale();
    let mut edges = Vec::with_capacity(grid.len() + 1);
    edges.push(0.0);
    edges.extend(grid.iter().map(|&g| g / sigma));
    let pieces: Vec<f64> = edges
        .par_windows(2)
        .map(|w| {
            if w[1] > w[0] {
                unit_cdf_segment(&integrand, w[0], w[1], tol / grid.len() as f64, 1)
            } else {
                Ok(0.0)
            }
        })
        .collect::<Result<_>>()?;
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(grid.len());
    for piece in pieces {
        acc += piece;
        let v = acc.clamp(0.0, 1.0);
        out.push(out.last().map_or(v, |&prev: &f64| prev.max(v)));
    }
    Ok(out)
}

/// The law `Γ(m, σ/(n - j + 1))` that earlier work assigned to `Y_j`.
pub fn claimed_law_yj(n: usize, j: usize, p: GammaParams) -> Result<GammaParams> {
    if n < 2 || j < 2 || j > n {
        return Err(Error::InvalidParameter(format!(
            "claimed spacing law needs 2 <= j <= n, got n={n}, j={j}"
        )));
    }
    GammaParams::new(p.shape(), p.scale() / (n - j + 1) as f64)
}

/// Density of the claimed law for `Y_j` under unit sample scale. At `y = 0` the right-hand limit is returned.
pub fn claimed_pdf_yj(n: usize, j: usize, m: f64, y: f64) -> Result<f64> {
    let law = claimed_law_yj(n, j, GammaParams::standard(m)?)?;
    Ok(claimed_density(law, y))
}

fn claimed_density(law: GammaParams, y: f64) -> f64 {
    if y == 0.0 {
        gamma_pdf_at_zero(law)
    } else {
        gamma_pdf(y, law)
    }
}

/// Which spacing density to tabulate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpacingDensity {
    /// Closed-form Y_2 law (n = 2, integer shape), at the sample scale.
    Exact { params: GammaParams },
    /// The claimed Γ(m, σ/(n - j + 1)) law for `Y_j`.
    Claimed {
        n: usize,
        j: usize,
        params: GammaParams,
    },
    /// Quadrature of the general spacing integral.
    Numeric {
        index: SpacingIndex,
        params: GammaParams,
        tol: f64,
    },
}

impl SpacingDensity {
    pub fn name(&self) -> &'static str {
        match self {
            SpacingDensity::Exact { .. } => "exact",
            SpacingDensity::Claimed { .. } => "claimed",
            SpacingDensity::Numeric { .. } => "numeric",
        }
    }

    pub fn eval(&self, y: f64) -> Result<f64> {
        match *self {
            SpacingDensity::Exact { params } => {
                let sigma = params.scale();
                Ok(y2_pdf_exact(params.shape(), y / sigma)? / sigma)
            }
            SpacingDensity::Claimed { n, j, params } => {
                Ok(claimed_density(claimed_law_yj(n, j, params)?, y))
            }
            SpacingDensity::Numeric { index, params, tol } => {
                spacing_pdf_numeric(index, params, y, tol)
            }
        }
    }
}

/// A pdf tabulated on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    #[serde(rename = "y")]
    pub grid: Vec<f64>,
    #[serde(rename = "f")]
    pub values: Vec<f64>,
    /// `|trapezoid integral - 1|` over the grid.
    pub normalization_error: f64,
}

impl DensityCurve {
    pub fn from_values(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() || grid.len() < 2 {
            return Err(Error::InvalidParameter(
                "density curve needs equal-length grid and values with at least 2 points".into(),
            ));
        }
        if values.iter().any(|v| v.is_nan() || *v < 0.0) {
            return Err(Error::InvalidParameter(
                "density values must be nonnegative".into(),
            ));
        }
        let area: f64 = grid
            .windows(2)
            .zip(values.windows(2))
            .map(|(g, v)| 0.5 * (g[1] - g[0]) * (v[0] + v[1]))
            .sum();
        Ok(Self {
            grid,
            values,
            normalization_error: (area - 1.0).abs(),
        })
    }

    /// Writes `y,f` rows with a header line.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "y,f")?;
        for (y, f) in self.grid.iter().zip(&self.values) {
            writeln!(out, "{y},{f}")?;
        }
        Ok(())
    }
}

/// Tabulates `density` on `points` equally spaced values covering `[0, y_max]`.
pub fn density_curve(density: SpacingDensity, y_max: f64, points: usize) -> Result<DensityCurve> {
    if !(y_max.is_finite() && y_max > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "y_max must be positive, got {y_max}"
        )));
    }
    if points < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 grid points, got {points}"
        )));
    }
    let step = y_max / (points - 1) as f64;
    let grid: Vec<f64> = (0..points)
        .map(|i| {
            if i + 1 == points {
                y_max
            } else {
                step * i as f64
            }
        })
        .collect();
    let values = grid
        .par_iter()
        .map(|&y| density.eval(y))
        .collect::<Result<Vec<_>>>()?;
    DensityCurve::from_values(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    const E_INV: f64 = 0.367_879_441_171_442_33;

    fn unit(m: f64) -> GammaParams {
        GammaParams::standard(m).unwrap()
    }

    #[test]
    fn index_validation() {
        assert!(SpacingIndex::new(1, 1, 0).is_err());
        assert!(SpacingIndex::new(5, 3, 3).is_err());
        assert!(SpacingIndex::new(5, 6, 2).is_err());
        assert!(SpacingIndex::new(5, 3, 0).is_err());
        assert!(SpacingIndex::consecutive(4, 1).is_err());
        assert!(SpacingIndex::consecutive(4, 5).is_err());
        let idx = SpacingIndex::consecutive(4, 3).unwrap();
        assert_eq!((idx.n(), idx.s(), idx.r()), (4, 3, 2));
    }

    #[test]
    fn exact_y2_examples() {
        assert!((y2_pdf_exact(1.0, 1.0).unwrap() - E_INV).abs() < 1e-15);
        assert!((y2_pdf_exact(2.0, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((y2_pdf_exact(2.0, 1e-300).unwrap() - 0.5).abs() < 1e-15);
        assert!((y2_pdf_exact(2.0, 1.0).unwrap() - E_INV).abs() < 1e-15);
        assert_eq!(y2_pdf_exact(3.0, -0.5).unwrap(), 0.0);
    }

    #[test]
    fn exact_y2_rejects_non_integer_shape() {
        for m in [2.5, 0.0, -1.0, f64::NAN] {
            assert!(
                matches!(y2_pdf_exact(m, 1.0), Err(Error::Domain(_))),
                "m={m}"
            );
            assert!(y2_mixture(m).is_err());
        }
    }

    #[test]
    fn exact_y2_survives_large_shape() {
        // Γ(2m-1) overflows f64 well before m = 200.
        let v = y2_pdf_exact(200.0, 10.0).unwrap();
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn mixture_examples() {
        let one = y2_mixture(1.0).unwrap();
        assert_eq!(one.component_shapes, vec![1]);
        assert!((one.weights[0] - 1.0).abs() < 1e-15);

        let two = y2_mixture(2.0).unwrap();
        assert_eq!(two.component_shapes, vec![1, 2]);
        for w in &two.weights {
            assert!((w - 0.5).abs() < 1e-15);
        }

        let three = y2_mixture(3.0).unwrap();
        let expected = [3.0 / 8.0, 3.0 / 8.0, 1.0 / 4.0];
        for (w, e) in three.weights.iter().zip(expected) {
            assert!((w - e).abs() < 1e-15);
        }
        assert!((three.mean() - 1.875).abs() < 1e-14);
    }

    #[test]
    fn mixture_matches_closed_form() {
        for m in 1..=10 {
            let mix = y2_mixture(m as f64).unwrap();
            for i in 0..=200 {
                let y = i as f64 * 0.1;
                let direct = y2_pdf_exact(m as f64, y).unwrap();
                assert!((mix.pdf(y) - direct).abs() < 1e-12, "m={m} y={y}");
            }
        }
    }

    #[test]
    fn numeric_examples() {
        let tol = 1e-9;
        let two = SpacingIndex::consecutive(2, 2).unwrap();
        assert!((spacing_pdf_numeric(two, unit(1.0), 1.0, tol).unwrap() - E_INV).abs() < 1e-8);
        assert!(
            (spacing_pdf_numeric(two, unit(2.0), 1.0, tol).unwrap()
                - y2_pdf_exact(2.0, 1.0).unwrap())
            .abs()
                < 1e-6
        );
        let three = SpacingIndex::consecutive(3, 3).unwrap();
        let got = spacing_pdf_numeric(three, unit(1.0), 0.5, tol).unwrap();
        assert!((got - (-0.5f64).exp()).abs() < 1e-8, "{got}");
        assert_eq!(
            spacing_pdf_numeric(three, unit(1.0), -1.0, tol).unwrap(),
            0.0
        );
        assert!(spacing_pdf_numeric(three, unit(1.0), 1.0, 0.0).is_err());
    }

    #[test]
    fn numeric_general_exponential_spacing() {
        // For unit exponentials X_(s) - X_(r) is a sum of independent Exp(n-k) with k = r..s-1.
        // With n = 4, s = 4, r = 2 the rates are 2 and 1: density 2(e^-y - e^-2y).
        let idx = SpacingIndex::new(4, 4, 2).unwrap();
        for &y in &[0.2, 1.0, 3.0] {
            let got = spacing_pdf_numeric(idx, unit(1.0), y, 1e-10).unwrap();
            let expected = 2.0 * ((-y).exp() - (-2.0 * y).exp());
            assert!((got - expected).abs() < 1e-8, "y={y}: {got} vs {expected}");
        }
    }

    #[test]
    fn numeric_scale_property() {
        let idx = SpacingIndex::consecutive(4, 3).unwrap();
        let scaled = GammaParams::new(2.5, 3.0).unwrap();
        for &y in &[0.3, 2.0, 7.5] {
            let lhs = spacing_pdf_numeric(idx, scaled, y, 1e-10).unwrap();
            let rhs = spacing_pdf_numeric(idx, unit(2.5), y / 3.0, 1e-10).unwrap() / 3.0;
            assert!((lhs - rhs).abs() < 1e-8);
        }
    }

    #[test]
    fn cdf_examples() {
        let two = SpacingIndex::consecutive(2, 2).unwrap();
        assert_eq!(spacing_cdf_numeric(two, unit(3.0), 0.0, 1e-9).unwrap(), 0.0);
        let half = spacing_cdf_numeric(two, unit(1.0), 2f64.ln(), 1e-9).unwrap();
        assert!((half - 0.5).abs() < 1e-8);
        let nearly_one = spacing_cdf_numeric(two, unit(3.0), 40.0, 1e-9).unwrap();
        assert!((nearly_one - 1.0).abs() < 1e-6);
    }

    #[test]
    fn cdf_table_is_monotone_and_matches_pointwise() {
        let idx = SpacingIndex::consecutive(3, 2).unwrap();
        let p = unit(2.0);
        let grid: Vec<f64> = (1..=20).map(|i| i as f64 * 0.25).collect();
        let table = spacing_cdf_table(idx, p, &grid, 1e-9).unwrap();
        assert!(table.windows(2).all(|w| w[1] >= w[0]));
        for (&y, &v) in grid.iter().zip(&table).step_by(5) {
            let direct = spacing_cdf_numeric(idx, p, y, 1e-9).unwrap();
            assert!((v - direct).abs() < 1e-8);
        }
        assert!(spacing_cdf_table(idx, p, &[1.0, 0.5], 1e-9).is_err());
    }

    #[test]
    fn claimed_examples() {
        assert!((claimed_pdf_yj(2, 2, 1.0, 1.0).unwrap() - E_INV).abs() < 1e-15);
        assert_eq!(claimed_pdf_yj(3, 2, 1.0, 0.0).unwrap(), 2.0);
        assert!((claimed_pdf_yj(3, 2, 1.0, 1e-12).unwrap() - 2.0).abs() < 1e-10);
        // At y = 1 claim and truth coincide for m = 2; at the origin they do not.
        assert!((claimed_pdf_yj(2, 2, 2.0, 1.0).unwrap() - E_INV).abs() < 1e-15);
        assert_eq!(claimed_pdf_yj(2, 2, 2.0, 0.0).unwrap(), 0.0);
        assert!((y2_pdf_exact(2.0, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(claimed_pdf_yj(3, 4, 1.0, 1.0).is_err());
        assert!(claimed_pdf_yj(3, 1, 1.0, 1.0).is_err());
    }

    #[test]
    fn density_curve_examples() {
        let exact1 = density_curve(SpacingDensity::Exact { params: unit(1.0) }, 10.0, 101).unwrap();
        assert!(exact1.normalization_error < 1e-3);

        let exact2 = density_curve(SpacingDensity::Exact { params: unit(2.0) }, 8.0, 200).unwrap();
        assert!((exact2.values[0] - 0.5).abs() < 1e-15);
        assert_eq!(exact2.grid[0], 0.0);
        assert_eq!(*exact2.grid.last().unwrap(), 8.0);

        let claimed2 = density_curve(
            SpacingDensity::Claimed {
                n: 2,
                j: 2,
                params: unit(2.0),
            },
            8.0,
            200,
        )
        .unwrap();
        assert_eq!(claimed2.values[0], 0.0);

        assert!(density_curve(SpacingDensity::Exact { params: unit(2.5) }, 8.0, 10).is_err());
        assert!(density_curve(SpacingDensity::Exact { params: unit(2.0) }, 0.0, 10).is_err());
        assert!(density_curve(SpacingDensity::Exact { params: unit(2.0) }, 1.0, 1).is_err());
    }

    #[test]
    fn curve_csv_layout() {
        let c = DensityCurve::from_values(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "y,f\n0,1\n1,1\n");
        assert_eq!(c.normalization_error, 0.0);
    }
}
