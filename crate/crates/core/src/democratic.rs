//! Closed-form calculus of the democratic distribution `D_N(λ)`, the law on
//! `R^N` with density proportional to `exp(-λ ‖x‖∞)`.
//!
//! Every density is returned in log-domain. The marginal sums and the
//! normalizing constant involve factorials that overflow quickly in linear
//! domain; exponentiate at the call site if a plain density is needed.

use crate::error::{check_len, Error, Result};
use crate::mixture::{Component, ConditionalMixture, Tail};
use crate::special::{ln_binomial, ln_factorial, log_sum_exp};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

/// Dimension `N` and rate `λ` of `D_N(λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemocraticParams {
    dim: usize,
    rate: f64,
}

impl DemocraticParams {
    pub fn new(dim: usize, rate: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("dim", "must be at least 1"));
        }
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::param("rate", format!("must be positive, got {rate}")));
        }
        Ok(Self { dim, rate })
    }

    /// Prior used by the coder, where the rate scales with dimension: `λ = N μ`.
    pub fn from_mu(dim: usize, mu: f64) -> Result<Self> {
        Self::new(dim, dim as f64 * mu)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }
}

/// Double-sided gamma `dG(a, b)`: a symmetric random sign times `Gamma(a, b)`
/// (shape `a`, rate `b`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleGammaParams {
    pub shape: f64,
    pub rate: f64,
}

impl DoubleGammaParams {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        if !(shape > 0.0 && shape.is_finite()) {
            return Err(Error::param("shape", format!("must be positive, got {shape}")));
        }
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::param("rate", format!("must be positive, got {rate}")));
        }
        Ok(Self { shape, rate })
    }

    /// `ln[b^a / (2 Γ(a)) |x|^(a-1) exp(-b|x|)]`.
    pub fn log_pdf(&self, x: f64) -> f64 {
        let ax = x.abs();
        let (a, b) = (self.shape, self.rate);
        if ax == 0.0 {
            return match a.partial_cmp(&1.0) {
                Some(std::cmp::Ordering::Equal) => b.ln() - std::f64::consts::LN_2,
                Some(std::cmp::Ordering::Greater) => f64::NEG_INFINITY,
                _ => f64::INFINITY,
            };
        }
        a * b.ln() - std::f64::consts::LN_2 - ln_gamma(a) + (a - 1.0) * ax.ln() - b * ax
    }
}

/// The coordinate achieving `‖x‖∞` (0-based), which names the double cone
/// containing `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeIndex {
    pub index: usize,
    pub dominant_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: Vec<f64>,
    /// Common per-coordinate variance.
    pub variance: f64,
    /// Common off-diagonal covariance.
    pub covariance: f64,
}

pub fn linf_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// `ln C_N(λ) = ln N! + N ln(2/λ)`.
pub fn log_norm_const(params: &DemocraticParams) -> f64 {
    let n = params.dim;
    ln_factorial(n as u64) + n as f64 * (2.0 / params.rate).ln()
}

fn log_norm_const_raw(dim: usize, rate: f64) -> f64 {
    if dim == 0 {
        return 0.0;
    }
    ln_factorial(dim as u64) + dim as f64 * (2.0 / rate).ln()
}

pub fn log_pdf(x: &[f64], params: &DemocraticParams) -> Result<f64> {
    check_len(params.dim, x.len())?;
    Ok(-params.rate * linf_norm(x) - log_norm_const(params))
}

pub fn moments(params: &DemocraticParams) -> Moments {
    let n = params.dim as f64;
    let lambda = params.rate;
    Moments {
        mean: vec![0.0; params.dim],
        variance: (n + 1.0) * (n + 2.0) / (3.0 * lambda * lambda),
        covariance: 0.0,
    }
}

/// Log density of the sub-vector left after removing `removed` coordinates.
///
/// By exchangeability only the number of removed coordinates matters.
pub fn marginal_logpdf(x_keep: &[f64], removed: usize, params: &DemocraticParams) -> Result<f64> {
    let n = params.dim;
    if removed == 0 || removed >= n {
        return Err(Error::param(
            "removed",
            format!("must lie in 1..{n}, got {removed}"),
        ));
    }
    check_len(n - removed, x_keep.len())?;
    let lambda = params.rate;
    let m = linf_norm(x_keep);
    let j_total = removed as u64;
    let terms: Vec<f64> = (0..=j_total)
        .map(|j| {
            let power = if j == 0 {
                0.0
            } else if m == 0.0 {
                f64::NEG_INFINITY
            } else {
                j as f64 * m.ln()
            };
            ln_binomial(j_total, j) + ln_factorial(j_total - j)
                - (j_total - j) as f64 * lambda.ln()
                + power
        })
        .collect();
    Ok(removed as f64 * std::f64::consts::LN_2 - log_norm_const(params) + log_sum_exp(&terms)
        - lambda * m)
}

/// Single-coordinate marginal as the equal-weight mixture of `dG(j, λ)`,
/// `j = 1..N`.
pub fn coordinate_marginal_logpdf(x: f64, params: &DemocraticParams) -> f64 {
    let n = params.dim;
    let terms: Vec<f64> = (1..=n)
        .map(|j| DoubleGammaParams { shape: j as f64, rate: params.rate }.log_pdf(x))
        .collect();
    log_sum_exp(&terms) - (n as f64).ln()
}

/// Marginal of the vector with one coordinate removed:
/// `(1 + λ m) exp(-λ m) / (N C_{N-1}(λ))`, `m = ‖x_rest‖∞`.
pub fn leave_one_out_logpdf(x_rest: &[f64], params: &DemocraticParams) -> Result<f64> {
    let n = params.dim;
    if n < 2 {
        return Err(Error::param("dim", "needs N >= 2 to remove a coordinate"));
    }
    check_len(n - 1, x_rest.len())?;
    let lambda = params.rate;
    let m = linf_norm(x_rest);
    Ok((lambda * m).ln_1p() - lambda * m
        - (n as f64).ln()
        - log_norm_const_raw(n - 1, lambda))
}

/// Dominant coordinate of `x`; exact ties go to the lowest index.
pub fn cone_index(x: &[f64]) -> Result<ConeIndex> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in x.iter().enumerate() {
        if best.is_none_or(|(_, b)| v.abs() > b.abs()) {
            best = Some((i, v));
        }
    }
    match best {
        Some((index, dominant_value)) if dominant_value != 0.0 => Ok(ConeIndex {
            index,
            dominant_value,
        }),
        Some(_) => Err(Error::ZeroVector),
        None => Err(Error::Empty("vector")),
    }
}

/// Law of the dominant coordinate given its cone: `dG(N, λ)`.
pub fn dominant_given_cone_law(params: &DemocraticParams) -> DoubleGammaParams {
    DoubleGammaParams {
        shape: params.dim as f64,
        rate: params.rate,
    }
}

/// Probability that the removed coordinate dominates, given the others:
/// `1 / (1 + λ ‖x_rest‖∞)`.
pub fn prob_cone_given_rest(x_rest: &[f64], params: &DemocraticParams) -> Result<f64> {
    check_len(params.dim.saturating_sub(1), x_rest.len())?;
    Ok(1.0 / (1.0 + params.rate * linf_norm(x_rest)))
}

/// Log density of `x_rest` given that the removed coordinate does not
/// dominate. Returns `-inf` at the origin, where the density vanishes.
pub fn rest_given_not_cone_logpdf(x_rest: &[f64], params: &DemocraticParams) -> Result<f64> {
    let n = params.dim;
    if n < 2 {
        return Err(Error::param("dim", "needs N >= 2"));
    }
    check_len(n - 1, x_rest.len())?;
    let lambda = params.rate;
    let m = linf_norm(x_rest);
    if m == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok((lambda / (n - 1) as f64).ln() + m.ln() - log_norm_const_raw(n - 1, lambda) - lambda * m)
}

/// Full conditional of one coordinate given the others: uniform on
/// `(-m, m)` with weight `1 - c` and two exponential tails beyond `±m`
/// with weight `c / 2` each. When `m = 0` the uniform part is dropped and
/// the law is Laplace(λ).
pub fn conditional_mixture_prior(
    x_rest: &[f64],
    params: &DemocraticParams,
) -> Result<ConditionalMixture> {
    let c = prob_cone_given_rest(x_rest, params)?;
    let m = linf_norm(x_rest);
    let lambda = params.rate;
    let lower = Component::ShiftedExp { edge: m, rate: lambda, tail: Tail::Lower };
    let upper = Component::ShiftedExp { edge: m, rate: lambda, tail: Tail::Upper };
    if m == 0.0 {
        return ConditionalMixture::from_log_weights(vec![0.0, 0.0], vec![lower, upper]);
    }
    let ln_half_c = (0.5 * c).ln();
    ConditionalMixture::from_log_weights(
        vec![(-c).ln_1p(), ln_half_c, ln_half_c],
        vec![Component::Uniform { lo: -m, hi: m }, lower, upper],
    )
}
