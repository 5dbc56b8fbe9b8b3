use crate::error::{Error, Result};

/// Coordinate visiting order for Gibbs sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum ScanOrder {
    #[default]
    Ascending,
    /// Fresh uniform permutation every sweep.
    Random,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ChainConfig {
    pub total_iters: usize,
    pub burn_in: usize,
    /// Initial P-MALA step δ.
    pub step_size: f64,
    pub target_acceptance: (f64, f64),
    /// Adapt δ during burn-in.
    pub adapt: bool,
    pub scan: ScanOrder,
}

impl ChainConfig {
    pub fn new(total_iters: usize, burn_in: usize) -> Result<Self> {
        let cfg = ChainConfig {
            total_iters,
            burn_in,
            step_size: 0.1,
            target_acceptance: (0.4, 0.6),
            adapt: true,
            scan: ScanOrder::Ascending,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_step_size(mut self, delta: f64) -> Result<Self> {
        self.step_size = delta;
        self.validate()?;
        Ok(self)
    }

    pub fn with_adapt(mut self, adapt: bool) -> Self {
        self.adapt = adapt;
        self
    }

    pub fn with_scan(mut self, scan: ScanOrder) -> Self {
        self.scan = scan;
        self
    }

    pub fn with_target_acceptance(mut self, lo: f64, hi: f64) -> Result<Self> {
        self.target_acceptance = (lo, hi);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.total_iters == 0 {
            return Err(Error::param("total_iters", "must be positive"));
        }
        if self.burn_in >= self.total_iters {
            return Err(Error::param(
                "burn_in",
                format!("must be below total_iters ({} >= {})", self.burn_in, self.total_iters),
            ));
        }
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return Err(Error::param("step_size", format!("must be positive, got {}", self.step_size)));
        }
        let (lo, hi) = self.target_acceptance;
        if !(0.0 < lo && lo < hi && hi < 1.0) {
            return Err(Error::param("target_acceptance", format!("need 0 < lo < hi < 1, got ({lo}, {hi})")));
        }
        Ok(())
    }

    pub fn kept(&self) -> usize {
        self.total_iters - self.burn_in
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Chain {
    pub samples: Vec<Vec<f64>>,
    /// Accepted MH moves after burn-in. Zero for Gibbs chains.
    pub accept_count: usize,
    /// MH moves attempted after burn-in.
    pub proposals: usize,
    /// δ in force after burn-in.
    pub final_step_size: f64,
    pub config: ChainConfig,
}

impl Chain {
    pub fn kept(&self) -> &[Vec<f64>] {
        &self.samples[self.config.burn_in..]
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposals == 0 {
            0.0
        } else {
            self.accept_count as f64 / self.proposals as f64
        }
    }
}

/// Stochastic-approximation tuning of log δ toward a target acceptance
/// probability. Gain decays like t^-0.6 but never drops under 0.01, which
/// lets it follow a slowly drifting target during a posterior burn-in.
#[derive(Debug, Clone)]
pub struct StepAdapter {
    log_step: f64,
    target: f64,
    iter: u64,
}

impl StepAdapter {
    pub fn new(step: f64, target: f64) -> Self {
        StepAdapter { log_step: step.ln(), target, iter: 0 }
    }

    pub fn from_config(cfg: &ChainConfig) -> Self {
        let (lo, hi) = cfg.target_acceptance;
        Self::new(cfg.step_size, 0.5 * (lo + hi))
    }

    pub fn step(&self) -> f64 {
        self.log_step.exp()
    }

    /// Feed the MH acceptance probability of the last move.
    pub fn update(&mut self, accept_prob: f64) {
        self.iter += 1;
        let gain = ((self.iter as f64).powf(-0.6)).max(0.01);
        self.log_step += gain * (accept_prob - self.target);
        self.log_step = self.log_step.clamp(-60.0, 20.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(ChainConfig::new(0, 0).is_err());
        assert!(ChainConfig::new(10, 10).is_err());
        assert!(ChainConfig::new(10, 9).is_ok());
        assert!(ChainConfig::new(10, 0).unwrap().with_step_size(0.0).is_err());
        assert!(ChainConfig::new(10, 0).unwrap().with_target_acceptance(0.6, 0.4).is_err());
    }

    #[test]
    fn adapter_moves_toward_target() {
        let mut a = StepAdapter::new(1.0, 0.5);
        for _ in 0..100 {
            a.update(0.0);
        }
        assert!(a.step() < 1.0);
        let mut b = StepAdapter::new(1.0, 0.5);
        for _ in 0..100 {
            b.update(1.0);
        }
        assert!(b.step() > 1.0);
    }
}
