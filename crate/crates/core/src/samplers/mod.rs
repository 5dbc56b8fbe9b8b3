//! Random variate generation for the democratic distribution.
//!
//! Three generators are provided: an exact one built on the cone
//! decomposition, a component-wise Gibbs chain, and a proximal MALA chain.
//! [`diagnostics`] holds the autocorrelation estimator used to compare them.

mod chain;
pub mod diagnostics;
mod exact;
mod gibbs;
mod pmala;
pub mod primitives;

pub use chain::{Chain, ChainConfig, ScanOrder, StepAdapter};
pub use diagnostics::{acf, acf_series};
pub use exact::sample_exact;
pub use gibbs::gibbs_prior_chain;
pub use pmala::pmala_prior_chain;
pub use primitives::{
    sample_double_gamma, sample_gamma, sample_inverse_gamma, sample_truncated_normal,
};
