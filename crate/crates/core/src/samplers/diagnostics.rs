//! Autocorrelation of scalar summaries of a chain.

use crate::error::{Error, Result};

use super::chain::Chain;

/// Biased sample autocorrelation at lags `1..=max_lag`.
pub fn acf_series(series: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = series.len();
    if max_lag >= n || n < 2 {
        return Err(Error::TooShort { len: n, needed: max_lag + 1 });
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = series.iter().map(|s| s - mean).collect();
    let c0: f64 = centered.iter().map(|c| c * c).sum();
    if !(c0 > 0.0) || c0 <= 1e-300 * n as f64 {
        return Err(Error::ZeroVariance);
    }
    Ok((1..=max_lag)
        .map(|k| centered[..n - k].iter().zip(&centered[k..]).map(|(a, b)| a * b).sum::<f64>() / c0)
        .collect())
}

/// ACF of `statistic(sample)` over the post-burn-in part of `chain`.
pub fn acf<F: Fn(&[f64]) -> f64>(chain: &Chain, max_lag: usize, statistic: F) -> Result<Vec<f64>> {
    let s: Vec<f64> = chain.kept().iter().map(|x| statistic(x)).collect();
    acf_series(&s, max_lag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn white_noise() {
        let mut rng = RngStream::new(11, 0);
        let s: Vec<f64> = (0..100_000).map(|_| rng.sample(StandardNormal)).collect();
        let r = acf_series(&s, 20).unwrap();
        assert!(r.iter().all(|v| v.abs() < 0.02));
    }

    #[test]
    fn constant_errors() {
        assert!(matches!(acf_series(&[1.0; 50], 3), Err(Error::ZeroVariance)));
        assert!(matches!(acf_series(&[1.0, 2.0], 2), Err(Error::TooShort { .. })));
    }

    #[test]
    fn alternating_series() {
        let s: Vec<f64> = (0..1000).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let r = acf_series(&s, 2).unwrap();
        assert!((r[0] + 0.999).abs() < 1e-12);
        assert!((r[1] - 0.998).abs() < 1e-12);
    }
}
