//! Democratic (ℓ∞-prior) distribution, its random variate generators, the
//! ℓ∞ proximal operator and Bayesian anti-sparse coding.

// `!(a > b)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coder;
pub mod democratic;
pub mod error;
pub mod harness;
pub mod mixture;
pub mod prox;
pub mod rng;
pub mod samplers;
pub mod special;

pub use error::{Error, Result};
pub use rng::RngStream;
