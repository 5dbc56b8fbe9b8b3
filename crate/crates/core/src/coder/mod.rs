//! Bayesian anti-sparse coding: the hierarchical model `y = Hx + e` with a
//! democratic prior on `x`, Jeffreys prior on the noise variance and a
//! gamma hyperprior on the democratic rate; its posterior samplers, point
//! estimators and deterministic baselines.

mod chain;
mod estimators;
mod fitra;
mod posterior;
mod problem;
mod reference;

pub use chain::{
    run_chain, run_chain_from, CoefStepKind, Init, PosteriorChain, PosteriorConfig, StepScale,
};
pub use estimators::{mmap_estimate, mmse_estimate, EstimatorKind, EstimatorResult};
pub use fitra::{fitra, fitra_from, operator_norm_sq, FitraOutput};
pub use posterior::{
    coef_conditional_mixture, gibbs_coef_sweep, log_joint_posterior, log_marginal_posterior,
    pmala_coef_step, sample_mu, sample_sigma2, MoveStats, ResidualExponent, RESIDUAL_FLOOR,
};
pub use problem::CodingProblem;
pub use reference::{least_squares, reference_solvers, ridge_mean};
