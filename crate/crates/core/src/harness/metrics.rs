use crate::coder::CodingProblem;
use crate::democratic::linf_norm;
use crate::error::{check_len, Error, Result};
use serde::{Deserialize, Serialize};

/// Reconstruction quality of one estimate. An exact recovery gives
/// `snr_x = +inf`, serialized as the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    #[serde(with = "crate::harness::io::opt_extended_f64")]
    pub snr_x: Option<f64>,
    #[serde(with = "crate::harness::io::extended_f64")]
    pub snr_y: f64,
    pub papr: f64,
}

fn snr_db(signal2: f64, err2: f64) -> f64 {
    if err2 == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (signal2 / err2).log10()
    }
}

/// `N‖x‖∞² / ‖x‖²`.
pub fn papr(x: &[f64]) -> Result<f64> {
    let e: f64 = x.iter().map(|v| v * v).sum();
    if e == 0.0 {
        return Err(Error::ZeroVector);
    }
    let m = linf_norm(x);
    Ok(x.len() as f64 * m * m / e)
}

pub fn evaluate_metrics(x_true: Option<&[f64]>, x_hat: &[f64], problem: &CodingProblem) -> Result<Metrics> {
    check_len(problem.n(), x_hat.len())?;
    let snr_x = match x_true {
        Some(t) => {
            check_len(problem.n(), t.len())?;
            let s: f64 = t.iter().map(|v| v * v).sum();
            let e: f64 = t.iter().zip(x_hat).map(|(a, b)| (a - b) * (a - b)).sum();
            Some(snr_db(s, e))
        }
        None => None,
    };
    let y2 = problem.y().norm_squared();
    Ok(Metrics { snr_x, snr_y: snr_db(y2, problem.residual_norm2(x_hat)), papr: papr(x_hat)? })
}
