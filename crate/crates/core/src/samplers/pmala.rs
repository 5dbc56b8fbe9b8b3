use crate::democratic::{linf_norm, DemocraticParams};
use crate::error::{check_len, Result};
use crate::prox::prox_linf_in_place;
use rand::Rng;
use rand_distr::StandardNormal;

use super::chain::{Chain, ChainConfig, StepAdapter};

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum()
}

/// Proximal MALA chain targeting `D_N(λ)`; the drift is the prox of
/// `λ‖·‖∞` with weight `λδ/2`.
pub fn pmala_prior_chain<R: Rng + ?Sized>(
    params: &DemocraticParams,
    cfg: &ChainConfig,
    init: &[f64],
    rng: &mut R,
) -> Result<Chain> {
    cfg.validate()?;
    let n = params.dim();
    check_len(n, init.len())?;
    let lambda = params.rate();
    let mut adapter = StepAdapter::from_config(cfg);
    let mut x = init.to_vec();
    let mut x_norm = linf_norm(&x);
    let mut fwd = vec![0.0; n];
    let mut cand = vec![0.0; n];
    let mut rev = vec![0.0; n];
    let mut scratch = Vec::with_capacity(n);
    let mut samples = Vec::with_capacity(cfg.total_iters);
    let (mut accepted, mut proposals) = (0usize, 0usize);

    for t in 0..cfg.total_iters {
        let delta = adapter.step();
        let w = 0.5 * lambda * delta;
        let sd = delta.sqrt();

        fwd.copy_from_slice(&x);
        prox_linf_in_place(&mut fwd, w, &mut scratch);
        for (c, m) in cand.iter_mut().zip(&fwd) {
            let z: f64 = rng.sample(StandardNormal);
            *c = m + sd * z;
        }
        rev.copy_from_slice(&cand);
        prox_linf_in_place(&mut rev, w, &mut scratch);

        let cand_norm = linf_norm(&cand);
        let log_ratio = -lambda * (cand_norm - x_norm)
            - (sq_dist(&x, &rev) - sq_dist(&cand, &fwd)) / (2.0 * delta);
        let accept_prob = log_ratio.min(0.0).exp();
        let accept = rng.random::<f64>().ln() < log_ratio;
        if accept {
            std::mem::swap(&mut x, &mut cand);
            x_norm = cand_norm;
        }
        if t < cfg.burn_in {
            if cfg.adapt {
                adapter.update(accept_prob);
            }
        } else {
            proposals += 1;
            accepted += accept as usize;
        }
        samples.push(x.clone());
    }
    Ok(Chain {
        samples,
        accept_count: accepted,
        proposals,
        final_step_size: adapter.step(),
        config: cfg.clone(),
    })
}
