use crate::democratic::DemocraticParams;
use crate::error::{check_len, Error, Result};
use crate::samplers::{sample_exact, ChainConfig, StepAdapter};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::posterior::{gibbs_coef_sweep, pmala_coef_step, sample_mu, sigma2_from_residual};
use super::problem::CodingProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefStepKind {
    Gibbs,
    Pmala,
}

impl std::str::FromStr for CoefStepKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gibbs" => Ok(CoefStepKind::Gibbs),
            "pmala" | "p-mala" => Ok(CoefStepKind::Pmala),
            other => Err(Error::param("coef_step_kind", format!("unknown kind {other:?}"))),
        }
    }
}

/// How the P-MALA step relates to the current noise variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum StepScale {
    /// δ is used as is.
    Absolute,
    /// The effective step is `δ·σ²`, so the gradient step `δ/σ²` stays
    /// stable while σ² drifts.
    #[default]
    NoiseRelative,
}

/// Starting point of the coefficient chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Init {
    Zeros,
    /// One draw from `D_N(N·mu)`, taken from the chain's own stream.
    Prior { mu: f64 },
    Given(Vec<f64>),
}

impl Default for Init {
    fn default() -> Self {
        Init::Prior { mu: 1.0 }
    }
}

impl Init {
    pub fn draw<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        match self {
            Init::Zeros => Ok(vec![0.0; n]),
            Init::Prior { mu } => Ok(sample_exact(&DemocraticParams::from_mu(n, *mu)?, rng)),
            Init::Given(v) => {
                check_len(n, v.len())?;
                Ok(v.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorConfig {
    pub chain: ChainConfig,
    pub kind: CoefStepKind,
    /// MH moves per iteration for P-MALA.
    pub mh_moves: usize,
    pub step_scale: StepScale,
    #[serde(default)]
    pub init: Init,
}

impl PosteriorConfig {
    pub const DEFAULT_MH_MOVES: usize = 20;

    pub fn new(chain: ChainConfig, kind: CoefStepKind) -> Self {
        PosteriorConfig {
            chain,
            kind,
            mh_moves: Self::DEFAULT_MH_MOVES,
            step_scale: StepScale::default(),
            init: Init::default(),
        }
    }

    pub fn with_init(mut self, init: Init) -> Self {
        self.init = init;
        self
    }

    pub fn with_step_scale(mut self, scale: StepScale) -> Self {
        self.step_scale = scale;
        self
    }

    pub fn with_mh_moves(mut self, moves: usize) -> Self {
        self.mh_moves = moves;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorChain {
    pub x_samples: Vec<Vec<f64>>,
    pub sigma2_samples: Vec<f64>,
    pub mu_samples: Vec<f64>,
    pub burn_in: usize,
    pub coef_step_kind: CoefStepKind,
    pub mh_moves_per_iter: usize,
    /// Post-burn-in MH acceptance rate; zero for Gibbs.
    pub acceptance_rate: f64,
    /// δ after adaptation (in the units of the configured step scale).
    pub final_step_size: f64,
}

impl PosteriorChain {
    pub fn len(&self) -> usize {
        self.x_samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_samples.is_empty()
    }

    pub fn kept_x(&self) -> &[Vec<f64>] {
        &self.x_samples[self.burn_in.min(self.x_samples.len())..]
    }
}

/// Posterior chain with the default init and number of MH moves.
pub fn run_chain<R: Rng + ?Sized>(
    problem: &CodingProblem,
    cfg: &ChainConfig,
    kind: CoefStepKind,
    rng: &mut R,
) -> Result<PosteriorChain> {
    run_chain_from(problem, &PosteriorConfig::new(cfg.clone(), kind), rng)
}

/// Each iteration draws `σ²`, then `μ`, then updates the coefficients.
pub fn run_chain_from<R: Rng + ?Sized>(
    problem: &CodingProblem,
    cfg: &PosteriorConfig,
    rng: &mut R,
) -> Result<PosteriorChain> {
    let cc = &cfg.chain;
    cc.validate()?;
    if cfg.kind == CoefStepKind::Pmala && cfg.mh_moves == 0 {
        return Err(Error::param("mh_moves", "must be at least 1"));
    }
    let n = problem.n();
    let mut x = cfg.init.draw(n, rng)?;
    let mut adapter = StepAdapter::from_config(cc);
    let t = cc.total_iters;
    let mut chain = PosteriorChain {
        x_samples: Vec::with_capacity(t),
        sigma2_samples: Vec::with_capacity(t),
        mu_samples: Vec::with_capacity(t),
        burn_in: cc.burn_in,
        coef_step_kind: cfg.kind,
        mh_moves_per_iter: if cfg.kind == CoefStepKind::Pmala { cfg.mh_moves } else { 1 },
        acceptance_rate: 0.0,
        final_step_size: cc.step_size,
    };
    let (mut accepted, mut moves) = (0usize, 0usize);
    for it in 0..t {
        let sigma2 = sigma2_from_residual(problem.residual_norm2(&x), problem.m(), rng);
        let mu = sample_mu(&x, problem, rng)?;
        match cfg.kind {
            CoefStepKind::Gibbs => gibbs_coef_sweep(&mut x, sigma2, mu, problem, rng)?,
            CoefStepKind::Pmala => {
                let delta = match cfg.step_scale {
                    StepScale::Absolute => adapter.step(),
                    StepScale::NoiseRelative => adapter.step() * sigma2,
                };
                let stats = pmala_coef_step(&mut x, sigma2, mu, problem, delta, cfg.mh_moves, rng)?;
                if it < cc.burn_in {
                    if cc.adapt {
                        adapter.update(stats.mean_accept_prob());
                    }
                } else {
                    accepted += stats.accepted;
                    moves += stats.moves;
                }
            }
        }
        chain.x_samples.push(x.clone());
        chain.sigma2_samples.push(sigma2);
        chain.mu_samples.push(mu);
    }
    if moves > 0 {
        chain.acceptance_rate = accepted as f64 / moves as f64;
    }
    chain.final_step_size = adapter.step();
    Ok(chain)
}
