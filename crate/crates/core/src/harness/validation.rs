use crate::coder::{gibbs_coef_sweep, pmala_coef_step, CodingProblem, CoefStepKind};
use crate::democratic::{cone_index, DemocraticParams};
use crate::error::{Error, Result};
use crate::samplers::sample_exact;
use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Gamma};

use super::dct::build_dct_frame;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GewekeConfig {
    pub m: usize,
    pub n: usize,
    pub sigma2: f64,
    pub mu: f64,
    pub iters: usize,
    pub kind: CoefStepKind,
    /// P-MALA step δ (absolute) and moves per conditional draw.
    pub step_size: f64,
    pub mh_moves: usize,
}

impl Default for GewekeConfig {
    fn default() -> Self {
        GewekeConfig {
            m: 3,
            n: 3,
            sigma2: 0.25,
            mu: 2.0,
            iters: 20_000,
            kind: CoefStepKind::Gibbs,
            step_size: 0.2,
            mh_moves: 20,
        }
    }
}

impl GewekeConfig {
    pub fn with_kind(mut self, kind: CoefStepKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn rate(&self) -> f64 {
        self.n as f64 * self.mu
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GewekeOutput {
    pub x_samples: Vec<Vec<f64>>,
    /// MH acceptance rate, zero for Gibbs.
    pub acceptance_rate: f64,
}

/// Successive conditional sampling at fixed `(σ², μ)`: alternate
/// `y ~ N(Hx, σ²I)` and one coefficient update given `y`. The `x` draws
/// should follow `D_N(Nμ)`.
pub fn geweke_run<R: Rng + ?Sized>(cfg: &GewekeConfig, rng: &mut R) -> Result<GewekeOutput> {
    if !(cfg.sigma2 > 0.0 && cfg.sigma2.is_finite()) {
        return Err(Error::param("sigma2", "must be positive"));
    }
    if cfg.iters == 0 {
        return Err(Error::param("iters", "must be positive"));
    }
    if cfg.kind == CoefStepKind::Pmala && (cfg.mh_moves == 0 || !(cfg.step_size > 0.0)) {
        return Err(Error::param("step_size", "P-MALA needs a positive step and at least one move"));
    }
    let params = DemocraticParams::from_mu(cfg.n, cfg.mu)?;
    let h = build_dct_frame(cfg.m, cfg.n, rng)?;
    let mut problem = CodingProblem::new(DVector::zeros(cfg.m), h)?;
    let mut x = sample_exact(&params, rng);
    let sd = cfg.sigma2.sqrt();
    let mut out = Vec::with_capacity(cfg.iters);
    let (mut acc, mut moves) = (0usize, 0usize);
    for _ in 0..cfg.iters {
        let mean = problem.forward(&x);
        let y = DVector::from_iterator(cfg.m, mean.iter().map(|m| m + sd * rng.sample::<f64, _>(StandardNormal)));
        problem.set_y(y)?;
        match cfg.kind {
            CoefStepKind::Gibbs => gibbs_coef_sweep(&mut x, cfg.sigma2, cfg.mu, &problem, rng)?,
            CoefStepKind::Pmala => {
                let st = pmala_coef_step(&mut x, cfg.sigma2, cfg.mu, &problem, cfg.step_size, cfg.mh_moves, rng)?;
                acc += st.accepted;
                moves += st.moves;
            }
        }
        out.push(x.clone());
    }
    Ok(GewekeOutput {
        x_samples: out,
        acceptance_rate: if moves > 0 { acc as f64 / moves as f64 } else { 0.0 },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub ks_statistic: f64,
    pub p_value: f64,
    /// (theoretical quantile, empirical quantile) pairs.
    pub qq_points: Vec<(f64, f64)>,
}

/// Asymptotic Kolmogorov tail `P(K > t)`.
fn kolmogorov_sf(t: f64) -> f64 {
    if t < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * t * t).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// One-sample KS p-value with Stephens' small-sample correction.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d)
}

/// Two-sample KS statistic and asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("samples"));
    }
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < xa.len() && j < xb.len() {
        let v = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= v {
            i += 1;
        }
        while j < xb.len() && xb[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = (na * nb / (na + nb)).round().max(1.0) as usize;
    Ok((d, ks_p_value(d, ne)))
}

/// KS test of `samples` against `Gamma(shape, rate)` plus Q-Q points at
/// `n_qq` evenly spaced probabilities.
pub fn gamma_gof(samples: &[f64], shape: f64, rate: f64, n_qq: usize) -> Result<GofReport> {
    if samples.is_empty() {
        return Err(Error::Empty("samples"));
    }
    let law = Gamma::new(shape, rate).map_err(|e| Error::param("gamma", e.to_string()))?;
    let mut xs = samples.to_vec();
    if xs.iter().any(|v| v.is_nan()) {
        return Err(Error::param("samples", "NaN entry"));
    }
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &v) in xs.iter().enumerate() {
        let f = law.cdf(v);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    let qq_points = (1..=n_qq)
        .map(|k| {
            let p = k as f64 / (n_qq + 1) as f64;
            let idx = ((p * n).ceil() as usize).clamp(1, xs.len()) - 1;
            (law.inverse_cdf(p), xs[idx])
        })
        .collect();
    Ok(GofReport {
        ks_statistic: d,
        p_value: ks_p_value(d, xs.len()),
        qq_points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeReport {
    pub counts: Vec<usize>,
    pub chi2: f64,
    pub p_value: f64,
}

/// Pearson chi-square test that the dominant coordinate is uniform.
pub fn cone_uniformity(samples: &[Vec<f64>]) -> Result<ConeReport> {
    let n = samples.first().ok_or(Error::Empty("samples"))?.len();
    if n < 2 {
        return Err(Error::param("dimension", "needs at least two cones"));
    }
    let mut counts = vec![0usize; n];
    for x in samples {
        counts[cone_index(x)?.index] += 1;
    }
    let e = samples.len() as f64 / n as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    let law = ChiSquared::new((n - 1) as f64).map_err(|e| Error::param("chi2", e.to_string()))?;
    Ok(ConeReport { counts, chi2, p_value: law.sf(chi2) })
}

/// `|x_n|` on the dominant coordinate of each sample.
pub fn dominant_magnitudes(samples: &[Vec<f64>]) -> Result<Vec<f64>> {
    samples.iter().map(|x| cone_index(x).map(|c| c.dominant_value.abs())).collect()
}
