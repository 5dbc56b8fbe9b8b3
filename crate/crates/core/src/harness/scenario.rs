use crate::coder::{
    fitra_from, least_squares, mmap_estimate, mmse_estimate, ridge_mean, run_chain_from, CodingProblem,
    CoefStepKind, Init, PosteriorConfig, ResidualExponent, StepScale,
};
use crate::error::{Error, Result};
use crate::samplers::ChainConfig;
use crate::RngStream;
use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;

use super::dct::build_dct_frame;
use super::io::extended_f64;
use super::metrics::{evaluate_metrics, Metrics};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalModel {
    /// `y = Hx` with `x` entries `±1/N`, noise free.
    DemocraticToy,
    /// i.i.d. standard normal `y`.
    Gaussian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerSettings {
    /// One chain per kind; an empty list skips the MCMC estimators and FITRA-1.
    pub kinds: Vec<CoefStepKind>,
    pub step_size: f64,
    pub adapt: bool,
    pub step_scale: StepScale,
    pub mh_moves: usize,
    pub init: Init,
    pub exponent: ResidualExponent,
}

impl Default for SamplerSettings {
    fn default() -> Self {
        SamplerSettings {
            kinds: vec![CoefStepKind::Pmala, CoefStepKind::Gibbs],
            step_size: 0.1,
            adapt: true,
            step_scale: StepScale::NoiseRelative,
            mh_moves: PosteriorConfig::DEFAULT_MH_MOVES,
            init: Init::default(),
            exponent: ResidualExponent::Exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineSettings {
    /// FITRA with `β = 2λ̂σ̂²` from the first chain's post-burn-in means.
    pub fitra1: bool,
    /// FITRA with β tuned to hit this SNR_y (dB).
    pub target_snr_y: Option<f64>,
    /// FITRA with β tuned to hit this PAPR.
    pub target_papr: Option<f64>,
    pub log10_beta_range: (f64, f64),
    pub bisection_iters: usize,
    pub fitra_max_iters: usize,
    pub fitra_tol: f64,
    pub ls: bool,
    /// Gaussian-prior estimate with noise variance `ratio·‖y‖²/M` and unit
    /// prior variance per unit of `‖y‖²/M`.
    pub ridge_noise_ratio: Option<f64>,
}

impl Default for BaselineSettings {
    fn default() -> Self {
        BaselineSettings {
            fitra1: true,
            target_snr_y: Some(20.0),
            target_papr: Some(1.5),
            log10_beta_range: (-6.0, 4.0),
            bisection_iters: 30,
            fitra_max_iters: 20_000,
            fitra_tol: 1e-10,
            ls: true,
            ridge_noise_ratio: Some(1e-4),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: String,
    pub m: usize,
    pub n: usize,
    pub trials: usize,
    pub total_iters: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub signal: SignalModel,
    #[serde(default)]
    pub sampler: SamplerSettings,
    #[serde(default)]
    pub baselines: BaselineSettings,
}

impl ScenarioConfig {
    /// Small Gaussian-measurement problem, `M = 50`, `N = 70`.
    pub fn scenario1() -> Self {
        ScenarioConfig {
            name: "scenario1".into(),
            m: 50,
            n: 70,
            trials: 20,
            total_iters: 12_000,
            burn_in: 10_000,
            seed: 1,
            signal: SignalModel::Gaussian,
            sampler: SamplerSettings { adapt: false, ..SamplerSettings::default() },
            baselines: BaselineSettings::default(),
        }
    }

    /// `M = 128` with the given `N`; P-MALA only.
    pub fn scenario2(n: usize) -> Self {
        ScenarioConfig {
            name: format!("scenario2-n{n}"),
            m: 128,
            n,
            trials: 20,
            total_iters: 55_000,
            burn_in: 50_000,
            seed: 2,
            signal: SignalModel::Gaussian,
            sampler: SamplerSettings {
                kinds: vec![CoefStepKind::Pmala],
                adapt: false,
                ..SamplerSettings::default()
            },
            baselines: BaselineSettings::default(),
        }
    }

    /// Noise-free `±1/N` signal, `M = N = 16`.
    pub fn toy() -> Self {
        ScenarioConfig {
            name: "toy".into(),
            m: 16,
            n: 16,
            trials: 10,
            total_iters: 3000,
            burn_in: 2000,
            seed: 3,
            signal: SignalModel::DemocraticToy,
            sampler: SamplerSettings::default(),
            baselines: BaselineSettings {
                fitra1: false,
                target_snr_y: None,
                target_papr: None,
                ..BaselineSettings::default()
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.m > self.n {
            return Err(Error::param("m", format!("need 0 < M <= N, got M = {}, N = {}", self.m, self.n)));
        }
        if self.trials == 0 {
            return Err(Error::param("trials", "must be positive"));
        }
        if !self.sampler.kinds.is_empty() {
            ChainConfig::new(self.total_iters, self.burn_in)?;
        }
        let (lo, hi) = self.baselines.log10_beta_range;
        if !(lo < hi) {
            return Err(Error::param("log10_beta_range", "empty range"));
        }
        Ok(())
    }

    fn posterior_config(&self, kind: CoefStepKind) -> Result<PosteriorConfig> {
        let s = &self.sampler;
        let chain = ChainConfig::new(self.total_iters, self.burn_in)?
            .with_step_size(s.step_size)?
            .with_adapt(s.adapt);
        Ok(PosteriorConfig::new(chain, kind)
            .with_init(s.init.clone())
            .with_step_scale(s.step_scale)
            .with_mh_moves(s.mh_moves))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub metrics: Metrics,
    /// Regularization weight, FITRA only.
    pub beta: Option<f64>,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial: usize,
    pub estimates: BTreeMap<String, EstimateRecord>,
    /// Post-burn-in acceptance rate per chain kind (P-MALA only).
    pub acceptance: BTreeMap<String, f64>,
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    #[serde(with = "extended_f64")]
    pub mean: f64,
    #[serde(with = "extended_f64")]
    pub std: f64,
    #[serde(with = "extended_f64")]
    pub median: f64,
    #[serde(with = "extended_f64")]
    pub min: f64,
    #[serde(with = "extended_f64")]
    pub max: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let mut s = values.to_vec();
        s.sort_by(f64::total_cmp);
        let k = s.len();
        let median = if k % 2 == 1 { s[k / 2] } else { 0.5 * (s[k / 2 - 1] + s[k / 2]) };
        Some(Summary { mean, std, median, min: s[0], max: s[k - 1] })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSummary {
    pub count: usize,
    pub snr_y: Summary,
    pub papr: Summary,
    pub snr_x: Option<Summary>,
    pub seconds: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub config: ScenarioConfig,
    pub config_hash: String,
    pub trials: Vec<TrialReport>,
    pub aggregate: BTreeMap<String, EstimatorSummary>,
    pub seconds: f64,
}

impl ScenarioReport {
    /// Per-trial values of one metric for one estimator, skipping trials
    /// where it is missing.
    pub fn values(&self, label: &str, pick: impl Fn(&Metrics) -> f64) -> Vec<f64> {
        self.trials
            .iter()
            .filter_map(|t| t.estimates.get(label).map(|e| pick(&e.metrics)))
            .collect()
    }
}

/// Label of a chain-based estimate, e.g. `"P-MALA mMAP"`.
pub fn chain_label(kind: CoefStepKind, estimator: &str) -> String {
    let k = match kind {
        CoefStepKind::Gibbs => "Gibbs",
        CoefStepKind::Pmala => "P-MALA",
    };
    format!("{k} {estimator}")
}

/// Quantity a tuned FITRA run is pinned to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitraTarget {
    SnrY(f64),
    Papr(f64),
}

/// Bisection over `log10 β`, warm-starting each solve from the previous
/// one. Both SNR_y and PAPR fall as β grows, so a value above the target
/// moves the lower end up. Returns `(β, x̂)` at the final midpoint.
pub fn tune_fitra(
    problem: &CodingProblem,
    target: FitraTarget,
    settings: &BaselineSettings,
) -> Result<(f64, Vec<f64>)> {
    let (mut lo, mut hi) = settings.log10_beta_range;
    let mut x = vec![0.0; problem.n()];
    let mut beta = 10f64.powf(0.5 * (lo + hi));
    for _ in 0..settings.bisection_iters.max(1) {
        let mid = 0.5 * (lo + hi);
        beta = 10f64.powf(mid);
        let out = fitra_from(problem, beta, settings.fitra_max_iters, settings.fitra_tol, &x)?;
        x = out.result.x_hat;
        let above = match target {
            FitraTarget::SnrY(t) => evaluate_metrics(None, &x, problem).map(|m| m.snr_y > t).unwrap_or(false),
            // x̂ = 0 sits past every PAPR target
            FitraTarget::Papr(t) => evaluate_metrics(None, &x, problem).map(|m| m.papr > t).unwrap_or(false),
        };
        if above {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((beta, x))
}

/// FITRA metrics along a grid of β values, warm-started in grid order.
pub fn beta_path(problem: &CodingProblem, betas: &[f64], settings: &BaselineSettings) -> Result<Vec<(f64, Metrics)>> {
    let mut x = vec![0.0; problem.n()];
    let mut out = Vec::with_capacity(betas.len());
    for &b in betas {
        x = fitra_from(problem, b, settings.fitra_max_iters, settings.fitra_tol, &x)?.result.x_hat;
        if let Ok(m) = evaluate_metrics(None, &x, problem) {
            out.push((b, m));
        }
    }
    Ok(out)
}

/// Draws the trial's dictionary and observations.
pub fn draw_problem(cfg: &ScenarioConfig, rng: &mut RngStream) -> Result<(CodingProblem, Option<Vec<f64>>)> {
    let h = build_dct_frame(cfg.m, cfg.n, rng)?;
    let (y, x_true) = match cfg.signal {
        SignalModel::DemocraticToy => {
            let v = 1.0 / cfg.n as f64;
            let x: Vec<f64> = (0..cfg.n).map(|_| if rng.random::<bool>() { v } else { -v }).collect();
            let y = &h * DVector::from_column_slice(&x);
            (y, Some(x))
        }
        SignalModel::Gaussian => (DVector::from_fn(cfg.m, |_, _| rng.sample::<f64, _>(StandardNormal)), None),
    };
    Ok((CodingProblem::new(y, h)?, x_true))
}

fn record(
    out: &mut TrialReport,
    label: String,
    x_hat: &[f64],
    x_true: Option<&[f64]>,
    problem: &CodingProblem,
    beta: Option<f64>,
    started: Instant,
) {
    let seconds = started.elapsed().as_secs_f64();
    match evaluate_metrics(x_true, x_hat, problem) {
        Ok(metrics) => {
            out.estimates.insert(label, EstimateRecord { metrics, beta, seconds });
        }
        Err(e) => out.errors.push(format!("{label}: {e}")),
    }
}

/// One trial on its own stream `(seed, trial)`.
pub fn run_trial(cfg: &ScenarioConfig, trial: usize) -> TrialReport {
    let mut out = TrialReport {
        trial,
        estimates: BTreeMap::new(),
        acceptance: BTreeMap::new(),
        errors: Vec::new(),
    };
    if let Err(e) = trial_body(cfg, trial, &mut out) {
        out.errors.push(e.to_string());
    }
    out
}

fn trial_body(cfg: &ScenarioConfig, trial: usize, out: &mut TrialReport) -> Result<()> {
    let mut rng = RngStream::new(cfg.seed, trial as u64);
    let (problem, x_true) = draw_problem(cfg, &mut rng)?;
    let xt = x_true.as_deref();
    let mut plug_in: Option<(f64, f64)> = None;
    for (k, &kind) in cfg.sampler.kinds.iter().enumerate() {
        let mut crng = rng.substream(k as u64);
        let t0 = Instant::now();
        let chain = run_chain_from(&problem, &cfg.posterior_config(kind)?, &mut crng)?;
        let mmse = mmse_estimate(&chain)?;
        record(out, chain_label(kind, "MMSE"), &mmse.x_hat, xt, &problem, None, t0);
        let mmap = mmap_estimate(&chain, &problem, cfg.sampler.exponent)?;
        record(out, chain_label(kind, "mMAP"), &mmap.x_hat, xt, &problem, None, t0);
        if kind == CoefStepKind::Pmala {
            out.acceptance.insert("P-MALA".into(), chain.acceptance_rate);
        }
        if plug_in.is_none() {
            let kept = (chain.len() - chain.burn_in) as f64;
            let mu = chain.mu_samples[chain.burn_in..].iter().sum::<f64>() / kept;
            let s2 = chain.sigma2_samples[chain.burn_in..].iter().sum::<f64>() / kept;
            plug_in = Some((cfg.n as f64 * mu, s2));
        }
    }
    let b = &cfg.baselines;
    if let (true, Some((lambda, s2))) = (b.fitra1, plug_in) {
        let t0 = Instant::now();
        let beta = 2.0 * lambda * s2;
        let x = fitra_from(&problem, beta, b.fitra_max_iters, b.fitra_tol, &vec![0.0; cfg.n])?.result.x_hat;
        record(out, "FITRA-1".into(), &x, xt, &problem, Some(beta), t0);
    }
    for (label, target) in [
        ("FITRA-2", b.target_snr_y.map(FitraTarget::SnrY)),
        ("FITRA-3", b.target_papr.map(FitraTarget::Papr)),
    ] {
        if let Some(t) = target {
            let t0 = Instant::now();
            let (beta, x) = tune_fitra(&problem, t, b)?;
            record(out, label.into(), &x, xt, &problem, Some(beta), t0);
        }
    }
    if b.ls {
        let t0 = Instant::now();
        let x = least_squares(&problem)?;
        record(out, "LS".into(), &x, xt, &problem, None, t0);
    }
    if let Some(ratio) = b.ridge_noise_ratio {
        let t0 = Instant::now();
        let scale = problem.y().norm_squared() / cfg.m as f64;
        let x = ridge_mean(&problem, ratio * scale, scale)?;
        // the Gaussian posterior is symmetric, so its mean and MAP coincide
        record(out, "ridge MMSE".into(), &x, xt, &problem, None, t0);
        record(out, "ridge MAP".into(), &x, xt, &problem, None, t0);
    }
    Ok(())
}

/// Runs every trial in parallel and aggregates mean, std and median per
/// estimator. Trial failures are kept in the report.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    cfg.validate()?;
    let t0 = Instant::now();
    let trials: Vec<TrialReport> = (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, t)).collect();
    let mut labels: Vec<String> = trials.iter().flat_map(|t| t.estimates.keys().cloned()).collect();
    labels.sort();
    labels.dedup();
    let mut aggregate = BTreeMap::new();
    for label in labels {
        let recs: Vec<&EstimateRecord> = trials.iter().filter_map(|t| t.estimates.get(&label)).collect();
        let col = |f: &dyn Fn(&EstimateRecord) -> f64| recs.iter().map(|r| f(r)).collect::<Vec<_>>();
        let snr_x: Vec<f64> = recs.iter().filter_map(|r| r.metrics.snr_x).collect();
        aggregate.insert(
            label,
            EstimatorSummary {
                count: recs.len(),
                snr_y: Summary::of(&col(&|r| r.metrics.snr_y)).expect("label came from a record"),
                papr: Summary::of(&col(&|r| r.metrics.papr)).expect("label came from a record"),
                snr_x: Summary::of(&snr_x),
                seconds: Summary::of(&col(&|r| r.seconds)).expect("label came from a record"),
            },
        );
    }
    Ok(ScenarioReport {
        config: cfg.clone(),
        config_hash: super::io::config_hash(cfg)?,
        trials,
        aggregate,
        seconds: t0.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_basics() {
        let s = Summary::of(&[1.0, 2.0, 3.0, 10.0]).unwrap();
        assert_eq!(s.mean, 4.0);
        assert_eq!(s.median, 2.5);
        assert!((s.std - (50.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!(Summary::of(&[]).is_none());
    }

    #[test]
    fn tuned_fitra_hits_targets() {
        let cfg = ScenarioConfig::scenario1();
        let (p, _) = draw_problem(&cfg, &mut RngStream::new(9, 0)).unwrap();
        let b = BaselineSettings::default();
        let (_, x) = tune_fitra(&p, FitraTarget::SnrY(20.0), &b).unwrap();
        assert!((evaluate_metrics(None, &x, &p).unwrap().snr_y - 20.0).abs() < 0.05);
        let (_, x) = tune_fitra(&p, FitraTarget::Papr(1.5), &b).unwrap();
        assert!((evaluate_metrics(None, &x, &p).unwrap().papr - 1.5).abs() < 0.05);
    }

    #[test]
    fn invalid_config() {
        let mut c = ScenarioConfig::toy();
        c.m = 20;
        assert!(c.validate().is_err());
        c = ScenarioConfig::toy();
        c.trials = 0;
        assert!(run_scenario(&c).is_err());
    }
}
