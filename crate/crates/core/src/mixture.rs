//! Piecewise mixtures on disjoint intervals of the real line.
//!
//! Both the prior full conditional of one coordinate (uniform core plus two
//! exponential tails) and its posterior counterpart (three truncated
//! Gaussians) are represented by [`ConditionalMixture`].

use crate::error::{Error, Result};
use crate::samplers::primitives::sample_truncated_normal_std;
use crate::special::{ln_std_normal_pdf, log_ndtr_diff, log_sum_exp};
use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tail {
    /// Support `(-inf, -edge)`.
    Lower,
    /// Support `(edge, inf)`.
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Component {
    Uniform { lo: f64, hi: f64 },
    /// Exponential with the given rate, shifted to start at `±edge`.
    ShiftedExp { edge: f64, rate: f64, tail: Tail },
    TruncatedNormal { mean: f64, var: f64, lo: f64, hi: f64 },
}

impl Component {
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Component::Uniform { lo, hi } => (lo, hi),
            Component::ShiftedExp { edge, tail, .. } => match tail {
                Tail::Lower => (f64::NEG_INFINITY, -edge),
                Tail::Upper => (edge, f64::INFINITY),
            },
            Component::TruncatedNormal { lo, hi, .. } => (lo, hi),
        }
    }

    fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.support();
        x > lo && x < hi
    }

    /// Normalized log density of the component at `x` (`-inf` off support).
    pub fn log_pdf(&self, x: f64) -> f64 {
        if !self.contains(x) {
            return f64::NEG_INFINITY;
        }
        match *self {
            Component::Uniform { lo, hi } => -(hi - lo).ln(),
            Component::ShiftedExp { edge, rate, .. } => rate.ln() - rate * (x.abs() - edge),
            Component::TruncatedNormal { mean, var, lo, hi } => {
                let s = var.sqrt();
                ln_std_normal_pdf((x - mean) / s)
                    - s.ln()
                    - log_ndtr_diff((lo - mean) / s, (hi - mean) / s)
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Component::Uniform { lo, hi } => lo + (hi - lo) * rng.random::<f64>(),
            Component::ShiftedExp { edge, rate, tail } => {
                let e: f64 = Exp1.sample(rng);
                let mag = edge + e / rate;
                match tail {
                    Tail::Lower => -mag,
                    Tail::Upper => mag,
                }
            }
            Component::TruncatedNormal { mean, var, lo, hi } => {
                let s = var.sqrt();
                mean + s * sample_truncated_normal_std((lo - mean) / s, (hi - mean) / s, rng)
            }
        }
    }
}

/// Law of one coordinate given all the others: a finite mixture whose
/// components live on pairwise disjoint intervals covering the real line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalMixture {
    weights: Vec<f64>,
    log_weights: Vec<f64>,
    components: Vec<Component>,
}

impl ConditionalMixture {
    /// Builds the mixture from unnormalized log weights.
    pub fn from_log_weights(log_weights: Vec<f64>, components: Vec<Component>) -> Result<Self> {
        if log_weights.len() != components.len() {
            return Err(Error::DimensionMismatch {
                expected: components.len(),
                got: log_weights.len(),
            });
        }
        if components.is_empty() {
            return Err(Error::Empty("mixture components"));
        }
        let total = log_sum_exp(&log_weights);
        if !total.is_finite() {
            return Err(Error::param(
                "log_weights",
                format!("cannot normalize (log total = {total})"),
            ));
        }
        let log_weights: Vec<f64> = log_weights.iter().map(|w| w - total).collect();
        let weights = log_weights.iter().map(|w| w.exp()).collect();
        Ok(Self {
            weights,
            log_weights,
            components,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn log_pdf(&self, x: f64) -> f64 {
        self.components
            .iter()
            .zip(&self.log_weights)
            .find(|(c, _)| c.contains(x))
            .map_or(f64::NEG_INFINITY, |(c, lw)| lw + c.log_pdf(x))
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.log_pdf(x).exp()
    }

    /// Index of the component drawn for a uniform variate `u` in `[0, 1)`.
    fn pick(&self, u: f64) -> usize {
        let mut acc = 0.0;
        let mut last = 0;
        for (k, &w) in self.weights.iter().enumerate() {
            if w <= 0.0 {
                continue;
            }
            acc += w;
            last = k;
            if u < acc {
                return k;
            }
        }
        last
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let k = self.pick(rng.random::<f64>());
        self.components[k].sample(rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn three_part() -> ConditionalMixture {
        ConditionalMixture::from_log_weights(
            vec![0.2f64.ln(), 0.5f64.ln(), 0.3f64.ln()],
            vec![
                Component::ShiftedExp { edge: 1.0, rate: 2.0, tail: Tail::Lower },
                Component::Uniform { lo: -1.0, hi: 1.0 },
                Component::ShiftedExp { edge: 1.0, rate: 2.0, tail: Tail::Upper },
            ],
        )
        .unwrap()
    }

    #[test]
    fn weights_normalize() {
        let m = three_part();
        let s: f64 = m.weights().iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert!((m.weights()[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn density_integrates_to_one() {
        let m = three_part();
        let h = 1e-4;
        let mut total = 0.0;
        let mut x = -30.0 + h / 2.0;
        while x < 30.0 {
            total += m.pdf(x) * h;
            x += h;
        }
        assert!((total - 1.0).abs() < 1e-6, "total = {total}");
    }

    #[test]
    fn sampling_respects_weights() {
        let m = three_part();
        let mut rng = RngStream::new(1, 0);
        let n = 50_000;
        let inside = (0..n).filter(|_| m.sample(&mut rng).abs() < 1.0).count();
        let frac = inside as f64 / n as f64;
        assert!((frac - 0.5).abs() < 0.01, "frac = {frac}");
    }

    #[test]
    fn zero_weight_component_is_never_drawn() {
        let m = ConditionalMixture::from_log_weights(
            vec![f64::NEG_INFINITY, 0.0],
            vec![
                Component::Uniform { lo: -1.0, hi: 1.0 },
                Component::ShiftedExp { edge: 1.0, rate: 1.0, tail: Tail::Upper },
            ],
        )
        .unwrap();
        let mut rng = RngStream::new(2, 0);
        assert!((0..1000).all(|_| m.sample(&mut rng) > 1.0));
    }

    #[test]
    fn rejects_unnormalizable_weights() {
        let err = ConditionalMixture::from_log_weights(
            vec![f64::NEG_INFINITY],
            vec![Component::Uniform { lo: 0.0, hi: 1.0 }],
        );
        assert!(err.is_err());
    }
}
