use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use antisparse::coder::{
    mmap_estimate, mmse_estimate, run_chain_from, CodingProblem, CoefStepKind, Init, PosteriorConfig,
    ResidualExponent, StepScale,
};
use antisparse::democratic::{linf_norm, DemocraticParams};
use antisparse::harness::io::{
    config_hash, read_problem, read_samples, write_json, write_plot_csv, write_posterior_chain, write_problem,
    write_samples,
};
use antisparse::harness::{
    cone_uniformity, dominant_magnitudes, draw_problem, evaluate_metrics, gamma_gof, geweke_run, run_scenario,
    GewekeConfig, ScenarioConfig, SignalModel,
};
use antisparse::prox::prox_linf;
use antisparse::samplers::{acf_series, gibbs_prior_chain, pmala_prior_chain, sample_exact, ChainConfig};
use antisparse::RngStream;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "antisparse", version, about = "Democratic prior samplers and Bayesian anti-sparse coding")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Generator {
    Exact,
    Gibbs,
    Pmala,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Gibbs,
    Pmala,
}

impl From<Kind> for CoefStepKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Gibbs => CoefStepKind::Gibbs,
            Kind::Pmala => CoefStepKind::Pmala,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Signal {
    Gaussian,
    Toy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Exponent {
    Exact,
    Half,
}

#[derive(Subcommand)]
enum Cmd {
    /// Draw from D_N(λ) with one of the three generators.
    Sample {
        #[arg(long, value_enum, default_value = "exact")]
        kind: Generator,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: f64,
        /// Number of draws (chain length for the MCMC generators).
        #[arg(long, default_value_t = 10_000)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        burn_in: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// P-MALA step δ.
        #[arg(long, default_value_t = 0.1)]
        step_size: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// ℓ∞ proximal operator of a vector.
    Prox {
        #[arg(long)]
        weight: f64,
        /// Comma-separated entries.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
    },
    /// Run posterior chains on a problem and write chains plus estimates.
    Code {
        /// Problem CSV; omit to generate one.
        #[arg(long)]
        problem: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        m: usize,
        #[arg(long, default_value_t = 70)]
        n: usize,
        #[arg(long, value_enum, default_value = "gaussian")]
        signal: Signal,
        #[arg(long, value_enum, default_value = "pmala")]
        kind: Kind,
        #[arg(long, default_value_t = 12_000)]
        iters: usize,
        #[arg(long, default_value_t = 10_000)]
        burn_in: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// P-MALA δ, relative to the current σ² unless --absolute-step.
        #[arg(long, default_value_t = 0.1)]
        step_size: f64,
        #[arg(long)]
        absolute_step: bool,
        /// Robbins-Monro tuning of δ during burn-in.
        #[arg(long)]
        adapt: bool,
        #[arg(long, default_value_t = 20)]
        mh_moves: usize,
        #[arg(long, value_enum, default_value = "exact")]
        exponent: Exponent,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Successive conditional sampling check of a coefficient step.
    Geweke {
        #[arg(long, value_enum, default_value = "gibbs")]
        kind: Kind,
        #[arg(long, default_value_t = 20_000)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        qq_points: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Monte Carlo comparison of estimators over many trials.
    Scenario {
        /// JSON config; takes precedence over --preset.
        #[arg(long)]
        config: Option<PathBuf>,
        /// toy, scenario1 or scenario2-<N>.
        #[arg(long, default_value = "toy")]
        preset: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        iters: Option<usize>,
        #[arg(long)]
        burn_in: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Autocorrelation of ‖x‖∞ (or one coordinate) over a sample or chain file.
    Acf {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 20)]
        max_lag: usize,
        /// Coordinate index; ‖x‖∞ when omitted.
        #[arg(long)]
        coord: Option<usize>,
        /// Include the burn-in samples.
        #[arg(long)]
        all: bool,
    },
}

fn parse_vector(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad number {t:?}")))
        .collect()
}

fn ensure_dir(p: &Path) -> Result<()> {
    fs::create_dir_all(p).with_context(|| format!("creating {}", p.display()))
}

#[allow(clippy::too_many_arguments)]
fn cmd_sample(
    kind: Generator,
    n: usize,
    lambda: f64,
    iters: usize,
    burn_in: usize,
    seed: u64,
    step_size: f64,
    out: &Path,
) -> Result<()> {
    let params = DemocraticParams::new(n, lambda)?;
    let mut rng = RngStream::new(seed, 0);
    let start = Instant::now();
    let (samples, burn, acc) = match kind {
        Generator::Exact => ((0..iters).map(|_| sample_exact(&params, &mut rng)).collect(), 0, None),
        Generator::Gibbs | Generator::Pmala => {
            let cfg = ChainConfig::new(iters, burn_in)?.with_step_size(step_size)?;
            let init = sample_exact(&params, &mut rng);
            let chain = match kind {
                Generator::Gibbs => gibbs_prior_chain(&params, &cfg, &init, &mut rng)?,
                _ => pmala_prior_chain(&params, &cfg, &init, &mut rng)?,
            };
            let rate = matches!(kind, Generator::Pmala).then(|| chain.acceptance_rate());
            (chain.samples, burn_in, rate)
        }
    };
    let name = match kind {
        Generator::Exact => "exact",
        Generator::Gibbs => "gibbs",
        Generator::Pmala => "pmala",
    };
    let meta = json!({
        "generator": name,
        "lambda": lambda,
        "seed": seed,
        "step_size": step_size,
        "acceptance_rate": acc,
        "seconds": start.elapsed().as_secs_f64(),
    });
    write_samples(out, &samples, burn, meta)?;
    eprintln!("wrote {} draws to {}", samples.len(), out.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_code(
    problem_path: Option<&Path>,
    m: usize,
    n: usize,
    signal: Signal,
    kind: Kind,
    iters: usize,
    burn_in: usize,
    seed: u64,
    step_size: f64,
    absolute_step: bool,
    adapt: bool,
    mh_moves: usize,
    exponent: Exponent,
    out_dir: &Path,
) -> Result<()> {
    ensure_dir(out_dir)?;
    let (problem, x_true): (CodingProblem, Option<Vec<f64>>) = match problem_path {
        Some(p) => read_problem(p).with_context(|| format!("reading {}", p.display()))?,
        None => {
            let mut cfg = ScenarioConfig::scenario1();
            cfg.m = m;
            cfg.n = n;
            cfg.seed = seed;
            cfg.signal = match signal {
                Signal::Gaussian => SignalModel::Gaussian,
                Signal::Toy => SignalModel::DemocraticToy,
            };
            cfg.validate()?;
            let mut rng = RngStream::new(seed, u64::MAX);
            let (p, xt) = draw_problem(&cfg, &mut rng)?;
            write_problem(&out_dir.join("problem.csv"), &p, xt.as_deref(), json!({ "seed": seed }))?;
            (p, xt)
        }
    };
    let chain_cfg = ChainConfig::new(iters, burn_in)?.with_step_size(step_size)?.with_adapt(adapt);
    let cfg = PosteriorConfig::new(chain_cfg, kind.into())
        .with_init(Init::default())
        .with_step_scale(if absolute_step { StepScale::Absolute } else { StepScale::NoiseRelative })
        .with_mh_moves(mh_moves);
    let exponent = match exponent {
        Exponent::Exact => ResidualExponent::Exact,
        Exponent::Half => ResidualExponent::Half,
    };
    let start = Instant::now();
    let chain = run_chain_from(&problem, &cfg, &mut RngStream::new(seed, 0))?;
    let seconds = start.elapsed().as_secs_f64();
    let hash = config_hash(&cfg)?;
    write_posterior_chain(&out_dir.join("chain.csv"), &chain, json!({ "seed": seed, "config_hash": hash }))?;

    let mut estimates = serde_json::Map::new();
    for est in [mmse_estimate(&chain), mmap_estimate(&chain, &problem, exponent)] {
        match est {
            Ok(e) => {
                let metrics = evaluate_metrics(x_true.as_deref(), &e.x_hat, &problem).ok();
                estimates.insert(
                    e.kind.label().to_string(),
                    json!({ "x_hat": e.x_hat, "score": e.score, "metrics": metrics }),
                );
            }
            Err(err) => eprintln!("estimator failed: {err}"),
        }
    }
    let report = json!({
        "config": cfg,
        "config_hash": hash,
        "seed": seed,
        "m": problem.m(),
        "n": problem.n(),
        "acceptance_rate": chain.acceptance_rate,
        "final_step_size": chain.final_step_size,
        "seconds": seconds,
        "estimates": estimates,
    });
    write_json(&out_dir.join("estimates.json"), &report)?;
    eprintln!("chain of {} iterations written to {}", chain.len(), out_dir.display());
    Ok(())
}

fn cmd_geweke(kind: Kind, iters: usize, seed: u64, qq: usize, out_dir: &Path) -> Result<()> {
    ensure_dir(out_dir)?;
    let cfg = GewekeConfig { iters, ..GewekeConfig::default() }.with_kind(kind.into());
    let start = Instant::now();
    let out = geweke_run(&cfg, &mut RngStream::new(seed, 0))?;
    let mags = dominant_magnitudes(&out.x_samples)?;
    let gof = gamma_gof(&mags, cfg.n as f64, cfg.rate(), qq)?;
    let cone = cone_uniformity(&out.x_samples)?;
    let k = out.x_samples.len() as f64;
    let variance: Vec<f64> = (0..cfg.n).map(|j| out.x_samples.iter().map(|x| x[j] * x[j]).sum::<f64>() / k).collect();
    let nf = cfg.n as f64;
    let report = json!({
        "config": cfg,
        "seed": seed,
        "ks_statistic": gof.ks_statistic,
        "ks_p_value": gof.p_value,
        "cone_counts": cone.counts,
        "cone_chi2": cone.chi2,
        "cone_p_value": cone.p_value,
        "variance": variance,
        "variance_target": (nf + 1.0) * (nf + 2.0) / (3.0 * cfg.rate() * cfg.rate()),
        "acceptance_rate": out.acceptance_rate,
        "seconds": start.elapsed().as_secs_f64(),
    });
    write_json(&out_dir.join("geweke.json"), &report)?;
    let rows: Vec<Vec<f64>> = gof.qq_points.iter().map(|&(a, b)| vec![a, b]).collect();
    write_plot_csv(&out_dir.join("qq.csv"), &["gamma_quantile".into(), "empirical_quantile".into()], &rows)?;
    println!("KS p = {:.4}, cone p = {:.4}", gof.p_value, cone.p_value);
    Ok(())
}

fn preset(name: &str) -> Result<ScenarioConfig> {
    Ok(match name {
        "toy" => ScenarioConfig::toy(),
        "scenario1" => ScenarioConfig::scenario1(),
        s => match s.strip_prefix("scenario2-").map(str::parse::<usize>) {
            Some(Ok(n)) => ScenarioConfig::scenario2(n),
            _ => bail!("unknown preset {s:?}; expected toy, scenario1 or scenario2-<N>"),
        },
    })
}

fn cmd_scenario(
    config: Option<&Path>,
    preset_name: &str,
    trials: Option<usize>,
    iters: Option<usize>,
    burn_in: Option<usize>,
    seed: Option<u64>,
    out_dir: &Path,
) -> Result<()> {
    ensure_dir(out_dir)?;
    let mut cfg = match config {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).context("parsing scenario config")?
        }
        None => preset(preset_name)?,
    };
    if let Some(t) = trials {
        cfg.trials = t;
    }
    if let Some(t) = iters {
        cfg.total_iters = t;
    }
    if let Some(b) = burn_in {
        cfg.burn_in = b;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let report = run_scenario(&cfg)?;
    write_json(&out_dir.join("report.json"), &report)?;

    let labels: Vec<&String> = report.aggregate.keys().collect();
    let mut columns = vec!["trial".to_string()];
    for l in &labels {
        columns.push(format!("{l} snr_y"));
        columns.push(format!("{l} papr"));
    }
    let rows: Vec<Vec<f64>> = report
        .trials
        .iter()
        .map(|t| {
            let mut r = vec![t.trial as f64];
            for l in &labels {
                match t.estimates.get(*l) {
                    Some(e) => r.extend([e.metrics.snr_y, e.metrics.papr]),
                    None => r.extend([f64::NAN, f64::NAN]),
                }
            }
            r
        })
        .collect();
    write_plot_csv(&out_dir.join("plot.csv"), &columns, &rows)?;

    for (label, s) in &report.aggregate {
        println!(
            "{label:<12} n={:<3} SNR_y {:>7.2} ± {:<6.2} PAPR {:>5.2} ± {:.2}",
            s.count, s.snr_y.mean, s.snr_y.std, s.papr.mean, s.papr.std
        );
    }
    Ok(())
}

fn cmd_acf(input: &Path, max_lag: usize, coord: Option<usize>, all: bool) -> Result<()> {
    let (xs, burn_in) = read_samples(input).with_context(|| format!("reading {}", input.display()))?;
    let kept = if all { &xs[..] } else { &xs[burn_in.min(xs.len())..] };
    let series: Vec<f64> = match coord {
        Some(j) => {
            if kept.first().is_some_and(|x| j >= x.len()) {
                bail!("coordinate {j} out of range");
            }
            kept.iter().map(|x| x[j]).collect()
        }
        None => kept.iter().map(|x| linf_norm(x)).collect(),
    };
    let acf = acf_series(&series, max_lag)?;
    println!("lag,acf");
    println!("0,1");
    for (k, v) in acf.iter().enumerate() {
        println!("{},{v:?}", k + 1);
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Sample { kind, n, lambda, iters, burn_in, seed, step_size, out } => {
            cmd_sample(kind, n, lambda, iters, burn_in, seed, step_size, &out)
        }
        Cmd::Prox { weight, values } => {
            if !(weight > 0.0 && weight.is_finite()) {
                bail!("weight must be positive");
            }
            let x = parse_vector(&values)?;
            let p: Vec<String> = prox_linf(&x, weight).iter().map(|v| format!("{v:?}")).collect();
            println!("{}", p.join(","));
            Ok(())
        }
        Cmd::Code {
            problem,
            m,
            n,
            signal,
            kind,
            iters,
            burn_in,
            seed,
            step_size,
            absolute_step,
            adapt,
            mh_moves,
            exponent,
            out_dir,
        } => cmd_code(
            problem.as_deref(),
            m,
            n,
            signal,
            kind,
            iters,
            burn_in,
            seed,
            step_size,
            absolute_step,
            adapt,
            mh_moves,
            exponent,
            &out_dir,
        ),
        Cmd::Geweke { kind, iters, seed, qq_points, out_dir } => cmd_geweke(kind, iters, seed, qq_points, &out_dir),
        Cmd::Scenario { config, preset, trials, iters, burn_in, seed, out_dir } => {
            cmd_scenario(config.as_deref(), &preset, trials, iters, burn_in, seed, &out_dir)
        }
        Cmd::Acf { input, max_lag, coord, all } => cmd_acf(&input, max_lag, coord, all),
    }
}
