use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

use super::chain::PosteriorChain;
use super::posterior::{log_marginal_posterior, ResidualExponent};
use super::problem::CodingProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EstimatorKind {
    #[serde(rename = "MMSE")]
    Mmse,
    #[serde(rename = "mMAP")]
    Mmap,
    #[serde(rename = "FITRA")]
    Fitra,
    #[serde(rename = "LS")]
    Ls,
    RidgeMmse,
    RidgeMap,
}

impl EstimatorKind {
    pub fn label(&self) -> &'static str {
        match self {
            EstimatorKind::Mmse => "MMSE",
            EstimatorKind::Mmap => "mMAP",
            EstimatorKind::Fitra => "FITRA",
            EstimatorKind::Ls => "LS",
            EstimatorKind::RidgeMmse => "ridge-MMSE",
            EstimatorKind::RidgeMap => "ridge-MAP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    pub x_hat: Vec<f64>,
    pub kind: EstimatorKind,
    /// Log marginal posterior of the selected sample (mMAP only).
    pub score: Option<f64>,
}

/// Mean of the post-burn-in coefficient samples.
pub fn mmse_estimate(chain: &PosteriorChain) -> Result<EstimatorResult> {
    let kept = chain.kept_x();
    let first = kept.first().ok_or(Error::Empty("post-burn-in samples"))?;
    let mut acc = vec![0.0; first.len()];
    for x in kept {
        for (a, v) in acc.iter_mut().zip(x) {
            *a += v;
        }
    }
    let k = kept.len() as f64;
    acc.iter_mut().for_each(|a| *a /= k);
    Ok(EstimatorResult { x_hat: acc, kind: EstimatorKind::Mmse, score: None })
}

/// Sample with the largest log marginal posterior over the whole chain;
/// the earliest wins ties.
pub fn mmap_estimate(
    chain: &PosteriorChain,
    problem: &CodingProblem,
    exponent: ResidualExponent,
) -> Result<EstimatorResult> {
    if chain.is_empty() {
        return Err(Error::Empty("chain"));
    }
    let mut best: Option<(usize, f64)> = None;
    for (i, x) in chain.x_samples.iter().enumerate() {
        let s = log_marginal_posterior(x, problem, exponent)?;
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((i, s));
        }
    }
    let (i, s) = best.expect("nonempty chain");
    if chain.x_samples.iter().all(|x| problem.residual_norm2(x) == 0.0) {
        return Err(Error::param("chain", "every sample has zero residual; the marginal posterior is unbounded"));
    }
    Ok(EstimatorResult { x_hat: chain.x_samples[i].clone(), kind: EstimatorKind::Mmap, score: Some(s) })
}
