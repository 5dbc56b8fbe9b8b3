use crate::democratic::{linf_norm, log_norm_const, DemocraticParams};
use crate::error::{check_len, Error, Result};
use crate::mixture::{Component, ConditionalMixture};
use crate::prox::prox_linf_in_place;
use crate::samplers::{sample_gamma, sample_inverse_gamma};
use crate::special::log_ndtr_diff;
use crate::special::log_ndtr;
use rand::Rng;
use rand_distr::StandardNormal;

use super::problem::CodingProblem;

/// Lower bound on `‖y - Hx‖²` inside the noise-variance conditional.
pub const RESIDUAL_FLOOR: f64 = 1e-12;

/// Power of the residual norm in the marginal posterior of `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum ResidualExponent {
    /// `‖y - Hx‖^{-M}`, the exact integral over the noise variance.
    #[default]
    Exact,
    /// `‖y - Hx‖^{-M/2}`.
    Half,
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be positive, got {v}")))
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

/// Log joint posterior of `(x, σ², μ)` up to a constant depending on `y`
/// only.
pub fn log_joint_posterior(x: &[f64], sigma2: f64, mu: f64, problem: &CodingProblem) -> Result<f64> {
    check_len(problem.n(), x.len())?;
    check_positive("sigma2", sigma2)?;
    check_positive("mu", mu)?;
    let (m, n) = (problem.m() as f64, problem.n() as f64);
    let lambda = n * mu;
    let prior = DemocraticParams::new(problem.n(), lambda)?;
    Ok(-(0.5 * m + 1.0) * sigma2.ln() - problem.residual_norm2(x) / (2.0 * sigma2)
        - log_norm_const(&prior)
        - lambda * linf_norm(x)
        + (problem.hyper_a() - 1.0) * mu.ln()
        - problem.hyper_b() * mu)
}

/// Log posterior of `x` with `σ²` and `μ` integrated out, up to a constant.
/// A zero residual gives `+inf`.
pub fn log_marginal_posterior(x: &[f64], problem: &CodingProblem, exponent: ResidualExponent) -> Result<f64> {
    check_len(problem.n(), x.len())?;
    let r2 = problem.residual_norm2(x);
    if r2 == 0.0 {
        return Ok(f64::INFINITY);
    }
    let (m, n) = (problem.m() as f64, problem.n() as f64);
    let p = match exponent {
        ResidualExponent::Exact => m,
        ResidualExponent::Half => 0.5 * m,
    };
    Ok(-0.5 * p * r2.ln()
        - (problem.hyper_a() + n) * (problem.hyper_b() + n * linf_norm(x)).ln())
}

pub(crate) fn sigma2_from_residual<R: Rng + ?Sized>(r2: f64, m: usize, rng: &mut R) -> f64 {
    sample_inverse_gamma(0.5 * m as f64, 0.5 * r2.max(RESIDUAL_FLOOR), rng)
}

/// Draw `σ² | x ~ IG(M/2, ‖y - Hx‖²/2)`.
pub fn sample_sigma2<R: Rng + ?Sized>(x: &[f64], problem: &CodingProblem, rng: &mut R) -> Result<f64> {
    check_len(problem.n(), x.len())?;
    Ok(sigma2_from_residual(problem.residual_norm2(x), problem.m(), rng))
}

/// Draw `μ | x ~ Gamma(a + N, b + N‖x‖∞)`.
pub fn sample_mu<R: Rng + ?Sized>(x: &[f64], problem: &CodingProblem, rng: &mut R) -> Result<f64> {
    check_len(problem.n(), x.len())?;
    let n = problem.n() as f64;
    Ok(sample_gamma(problem.hyper_a() + n, problem.hyper_b() + n * linf_norm(x), rng))
}

/// Conditional of one coefficient from `hᵀe` (with `e` the residual that
/// excludes this coefficient), `‖h‖²`, and `m` the largest magnitude among
/// the other coefficients.
fn conditional_from_parts(hte: f64, hn2: f64, m: f64, sigma2: f64, lambda: f64) -> Result<ConditionalMixture> {
    let var = sigma2 / hn2;
    let s = var.sqrt();
    let mu2 = hte / hn2;
    let shift = var * lambda;
    let mu1 = mu2 + shift;
    let mu3 = mu2 - shift;
    // Log weights relative to the common factor exp(μ2²/2s²).
    let common = 0.5 * var * lambda * lambda + lambda * m;
    let lw1 = lambda * mu2 + common + log_ndtr((-m - mu1) / s);
    let lw3 = -lambda * mu2 + common + log_ndtr((mu3 - m) / s);
    let lower = Component::TruncatedNormal { mean: mu1, var, lo: f64::NEG_INFINITY, hi: -m };
    let upper = Component::TruncatedNormal { mean: mu3, var, lo: m, hi: f64::INFINITY };
    if m == 0.0 {
        return ConditionalMixture::from_log_weights(vec![lw1, lw3], vec![lower, upper]);
    }
    let lw2 = log_ndtr_diff((-m - mu2) / s, (m - mu2) / s);
    ConditionalMixture::from_log_weights(
        vec![lw1, lw2, lw3],
        vec![lower, Component::TruncatedNormal { mean: mu2, var, lo: -m, hi: m }, upper],
    )
}

fn max_abs_except(x: &[f64], skip: usize) -> f64 {
    x.iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .fold(0.0, |acc, (_, v)| acc.max(v.abs()))
}

/// Full conditional of coefficient `n` (0-based) given the other entries of
/// `x` (the value of `x[n]` is ignored), `σ²` and `μ`: a mixture of three
/// truncated Gaussians on `(-∞, -m)`, `(-m, m)` and `(m, ∞)` where `m` is
/// the largest magnitude among the other coefficients.
pub fn coef_conditional_mixture(
    n: usize,
    x: &[f64],
    sigma2: f64,
    mu: f64,
    problem: &CodingProblem,
) -> Result<ConditionalMixture> {
    check_len(problem.n(), x.len())?;
    if n >= x.len() {
        return Err(Error::param("n", format!("index {n} out of range for length {}", x.len())));
    }
    check_positive("sigma2", sigma2)?;
    check_positive("mu", mu)?;
    let r = problem.residual(x);
    let hn2 = problem.col_norm2(n);
    let hte = dot(problem.column(n), &r) + x[n] * hn2;
    conditional_from_parts(hte, hn2, max_abs_except(x, n), sigma2, mu * problem.n() as f64)
}

/// One ascending Gibbs sweep over the coefficients, in place.
pub fn gibbs_coef_sweep<R: Rng + ?Sized>(
    x: &mut [f64],
    sigma2: f64,
    mu: f64,
    problem: &CodingProblem,
    rng: &mut R,
) -> Result<()> {
    check_len(problem.n(), x.len())?;
    check_positive("sigma2", sigma2)?;
    check_positive("mu", mu)?;
    let lambda = mu * problem.n() as f64;
    let mut r = problem.residual(x);
    for j in 0..x.len() {
        let h = problem.column(j);
        let hn2 = problem.col_norm2(j);
        let old = x[j];
        let hte = dot(h, &r) + old * hn2;
        let new = conditional_from_parts(hte, hn2, max_abs_except(x, j), sigma2, lambda)?.sample(rng);
        if !new.is_finite() {
            return Err(Error::param("coefficient draw", format!("non-finite value at {j}")));
        }
        let d = new - old;
        for (ri, hi) in r.iter_mut().zip(h) {
            *ri -= d * hi;
        }
        x[j] = new;
    }
    Ok(())
}

/// Outcome of a batch of MH moves.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MoveStats {
    pub moves: usize,
    pub accepted: usize,
    /// Sum of the MH acceptance probabilities.
    pub accept_prob_sum: f64,
}

impl MoveStats {
    pub fn mean_accept_prob(&self) -> f64 {
        if self.moves == 0 {
            0.0
        } else {
            self.accept_prob_sum / self.moves as f64
        }
    }
}

fn drift(x: &[f64], r: &[f64], problem: &CodingProblem, step: f64, w: f64, out: &mut [f64], scratch: &mut Vec<f64>) {
    out.copy_from_slice(x);
    problem.gradient_step_in_place(out, r, step);
    prox_linf_in_place(out, w, scratch);
}

/// `n_moves` proximal MALA moves on `x | σ², μ`, in place.
pub fn pmala_coef_step<R: Rng + ?Sized>(
    x: &mut [f64],
    sigma2: f64,
    mu: f64,
    problem: &CodingProblem,
    delta: f64,
    n_moves: usize,
    rng: &mut R,
) -> Result<MoveStats> {
    let n = problem.n();
    check_len(n, x.len())?;
    check_positive("sigma2", sigma2)?;
    check_positive("mu", mu)?;
    check_positive("delta", delta)?;
    if n_moves == 0 {
        return Err(Error::param("n_moves", "must be at least 1"));
    }
    let lambda = mu * n as f64;
    let step = delta / sigma2;
    let w = 0.5 * lambda * delta;
    let sd = delta.sqrt();
    let log_target = |r2: f64, linf: f64| -r2 / (2.0 * sigma2) - lambda * linf;

    let mut scratch = Vec::with_capacity(n);
    let mut r = problem.residual(x);
    let mut lt = log_target(norm2(&r), linf_norm(x));
    let mut fwd = vec![0.0; n];
    drift(x, &r, problem, step, w, &mut fwd, &mut scratch);
    let mut cand = vec![0.0; n];
    let mut rev = vec![0.0; n];
    let mut stats = MoveStats { moves: n_moves, ..Default::default() };

    for _ in 0..n_moves {
        for (c, f) in cand.iter_mut().zip(&fwd) {
            let z: f64 = rng.sample(StandardNormal);
            *c = f + sd * z;
        }
        let cand_r = problem.residual(&cand);
        let cand_lt = log_target(norm2(&cand_r), linf_norm(&cand));
        drift(&cand, &cand_r, problem, step, w, &mut rev, &mut scratch);
        let q_fwd: f64 = cand.iter().zip(&fwd).map(|(a, b)| (a - b) * (a - b)).sum();
        let q_rev: f64 = x.iter().zip(&rev).map(|(a, b)| (a - b) * (a - b)).sum();
        let log_ratio = cand_lt - lt + (q_fwd - q_rev) / (2.0 * delta);
        let prob = if log_ratio.is_nan() { 0.0 } else { log_ratio.min(0.0).exp() };
        stats.accept_prob_sum += prob;
        if rng.random::<f64>() < prob {
            stats.accepted += 1;
            x.copy_from_slice(&cand);
            r = cand_r;
            lt = cand_lt;
            std::mem::swap(&mut fwd, &mut rev);
        }
    }
    let _ = r;
    Ok(stats)
}
