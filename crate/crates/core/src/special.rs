//! Log-domain special functions shared by the densities and samplers.

use libm::{erf, erfc};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI};

/// `ln(n!)`.
pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `ln Σ exp(v)`, returning `-inf` for an empty or all `-inf` input.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

pub fn ln_std_normal_pdf(z: f64) -> f64 {
    -0.5 * z * z - 0.5 * (2.0 * PI).ln()
}

/// `ln Φ(z)` for the standard normal CDF, accurate deep into both tails.
pub fn log_ndtr(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if z > 0.0 {
        (-0.5 * erfc(z * FRAC_1_SQRT_2)).ln_1p()
    } else if z > -30.0 {
        (0.5 * erfc(-z * FRAC_1_SQRT_2)).ln()
    } else {
        // Mills-ratio asymptotic series.
        let z2 = z * z;
        let inv = 1.0 / z2;
        let series = 1.0 - inv * (1.0 - 3.0 * inv * (1.0 - 5.0 * inv * (1.0 - 7.0 * inv)));
        ln_std_normal_pdf(z) - (-z).ln() + series.ln()
    }
}

/// `ln(1 - Φ(z)) = ln Φ(-z)`.
pub fn log_ndtr_complement(z: f64) -> f64 {
    log_ndtr(-z)
}

/// `ln(Φ(b) - Φ(a))` for `a <= b`, without cancellation in either tail.
pub fn log_ndtr_diff(a: f64, b: f64) -> f64 {
    debug_assert!(a <= b, "log_ndtr_diff requires a <= b ({a}, {b})");
    if a >= b {
        return f64::NEG_INFINITY;
    }
    if a >= 0.0 {
        // Both in the upper half: work with survival functions.
        let la = log_ndtr(-a);
        let lb = log_ndtr(-b);
        la + log1m_exp(lb - la)
    } else if b <= 0.0 {
        let la = log_ndtr(a);
        let lb = log_ndtr(b);
        lb + log1m_exp(la - lb)
    } else {
        // Straddles zero: both erf terms are positive.
        (0.5 * (erf(b * FRAC_1_SQRT_2) + erf(-a * FRAC_1_SQRT_2))).ln()
    }
}

/// `ln(1 - exp(x))` for `x <= 0`.
pub fn log1m_exp(x: f64) -> f64 {
    if x > -LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}
