//! Log-gamma and the regularized incomplete gamma functions.
//!
//! `log_gamma` combines a Taylor series of `ln Γ(1 + z)` around the two roots
//! of `ln Γ` (x = 1 and x = 2) with a Lanczos approximation elsewhere, so the
//! relative error stays near machine precision even where `ln Γ(x)` vanishes.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Highest power kept in the `ln Γ(1 + z)` Taylor series; terms decay as 2^-k for |z| <= 1/2.
const SERIES_TERMS: usize = 60;

const LANCZOS_COEFFS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

/// Bernoulli numbers B_2, B_4, ..., B_14 for the Euler-Maclaurin tail of ζ(k).
const BERNOULLI_EVEN: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// ζ(k) for k = 2..=SERIES_TERMS+1, evaluated once by Euler-Maclaurin summation.
fn zeta_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| (2..=SERIES_TERMS + 1).map(zeta_integer).collect())
}

fn zeta_integer(k: usize) -> f64 {
    const N: usize = 16;
    let s = k as f64;
    let nf = N as f64;
    // Tail corrections first, smallest to largest.
    let mut tail = 0.0;
    for (j, &b) in BERNOULLI_EVEN.iter().enumerate().rev() {
        let order = 2 * (j + 1);
        let rising: f64 = (0..order - 1).map(|i| s + i as f64).product();
        let factorial: f64 = (1..=order).map(|v| v as f64).product();
        tail += b / factorial * rising * nf.powf(-s - order as f64 + 1.0);
    }
    let mut sum = tail + nf.powf(-s) / 2.0 + nf.powf(1.0 - s) / (s - 1.0);
    for n in (1..N).rev() {
        sum += (n as f64).powf(-s);
    }
    sum
}

/// `ln Γ(1 + z)` for |z| <= 1/2 via its Taylor series.
fn ln_gamma_1p_series(z: f64) -> f64 {
    let zeta = zeta_table();
    let mut acc = 0.0;
    // Highest order first so the small terms are not swamped.
    for k in (2..=SERIES_TERMS + 1).rev() {
        acc = acc * z + if k % 2 == 0 { 1.0 } else { -1.0 } * zeta[k - 2] / k as f64;
    }
    // acc now holds sum_k (-1)^k ζ(k) z^(k-2) / k
    z * (-EULER_GAMMA + z * acc)
}

fn ln_gamma_lanczos(x: f64) -> f64 {
    let mut y = x;
    let tmp = x + 5.242_187_5;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = 0.999_999_999_999_997_092;
    for c in LANCZOS_COEFFS {
        y += 1.0;
        ser += c / y;
    }
    tmp + (2.506_628_274_631_000_5 * ser / x).ln()
}

/// Unchecked `ln Γ(x)` for x > 0.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        ln_gamma_1p_series(x) - x.ln()
    } else if x <= 1.5 {
        ln_gamma_1p_series(x - 1.0)
    } else if x <= 2.5 {
        (x - 2.0).ln_1p() + ln_gamma_1p_series(x - 2.0)
    } else {
        ln_gamma_lanczos(x)
    }
}

/// Natural logarithm of the Gamma function.
///
/// Relative error stays below 1e-12 on `[1e-3, 1e3]`, including near the roots at 1 and 2.
pub fn log_gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok(ln_gamma(x))
}

/// `ln n!`
pub(crate) fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

const EPS: f64 = f64::EPSILON;
const TINY: f64 = 1e-300;
const MAX_ITERATIONS: usize = 100_000;

/// `exp(-x + a ln x - ln Γ(a))`, the common prefactor of both expansions.
fn incomplete_prefactor(a: f64, x: f64) -> f64 {
    (-x + a * x.ln() - ln_gamma(a)).exp()
}

fn lower_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_ITERATIONS {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * incomplete_prefactor(a, x)
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
fn upper_continued_fraction(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITERATIONS {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() <= EPS {
            break;
        }
    }
    incomplete_prefactor(a, x) * h
}

/// Regularized lower incomplete gamma `P(a, x)`; 0 for x <= 0.
pub fn regularized_gamma_p(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0);
    if x <= 0.0 || x.is_nan() {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    let p = if x < a + 1.0 {
        lower_series(a, x)
    } else {
        1.0 - upper_continued_fraction(a, x)
    };
    p.clamp(0.0, 1.0)
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 - P(a, x)`, computed without cancellation in the tail.
pub fn regularized_gamma_q(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0);
    if x <= 0.0 || x.is_nan() {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    let q = if x < a + 1.0 {
        1.0 - lower_series(a, x)
    } else {
        upper_continued_fraction(a, x)
    };
    q.clamp(0.0, 1.0)
}

/// Neumaier compensated sum.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut carry = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}
