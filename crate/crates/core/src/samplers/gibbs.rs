use crate::democratic::{conditional_mixture_prior, DemocraticParams};
use crate::error::{check_len, Result};
use rand::seq::SliceRandom;
use rand::Rng;

use super::chain::{Chain, ChainConfig, ScanOrder};

/// Component-wise Gibbs chain targeting `D_N(λ)`.
pub fn gibbs_prior_chain<R: Rng + ?Sized>(
    params: &DemocraticParams,
    cfg: &ChainConfig,
    init: &[f64],
    rng: &mut R,
) -> Result<Chain> {
    cfg.validate()?;
    let n = params.dim();
    check_len(n, init.len())?;
    let mut x = init.to_vec();
    let mut rest = vec![0.0; n.saturating_sub(1)];
    let mut order: Vec<usize> = (0..n).collect();
    let mut samples = Vec::with_capacity(cfg.total_iters);
    for _ in 0..cfg.total_iters {
        if cfg.scan == ScanOrder::Random {
            order.shuffle(rng);
        }
        for &j in &order {
            rest[..j].copy_from_slice(&x[..j]);
            rest[j..].copy_from_slice(&x[j + 1..]);
            x[j] = conditional_mixture_prior(&rest, params)?.sample(rng);
        }
        samples.push(x.clone());
    }
    Ok(Chain {
        samples,
        accept_count: 0,
        proposals: 0,
        final_step_size: cfg.step_size,
        config: cfg.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn sweep_from_origin_is_finite() {
        let p = DemocraticParams::new(2, 3.0).unwrap();
        let cfg = ChainConfig::new(1, 0).unwrap();
        let c = gibbs_prior_chain(&p, &cfg, &[0.0, 0.0], &mut RngStream::new(0, 0)).unwrap();
        assert!(c.samples[0].iter().all(|v| v.is_finite()));
    }

    #[test]
    fn init_length_checked() {
        let p = DemocraticParams::new(3, 1.0).unwrap();
        let cfg = ChainConfig::new(5, 0).unwrap();
        assert!(gibbs_prior_chain(&p, &cfg, &[0.0], &mut RngStream::new(0, 0)).is_err());
    }
}
