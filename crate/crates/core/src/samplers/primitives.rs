//! Scalar samplers: gamma family and exact truncated normal.

use crate::democratic::DoubleGammaParams;
use crate::error::{Error, Result};
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use std::f64::consts::PI;

/// `Gamma(shape, rate)`.
pub fn sample_gamma<R: Rng + ?Sized>(shape: f64, rate: f64, rng: &mut R) -> f64 {
    Gamma::new(shape, 1.0 / rate)
        .expect("gamma parameters are validated by callers")
        .sample(rng)
}

/// `IG(shape, rate)`, i.e. `rate / Gamma(shape, 1)`.
pub fn sample_inverse_gamma<R: Rng + ?Sized>(shape: f64, rate: f64, rng: &mut R) -> f64 {
    rate / sample_gamma(shape, 1.0, rng)
}

pub fn sample_double_gamma<R: Rng + ?Sized>(p: &DoubleGammaParams, rng: &mut R) -> f64 {
    let g = sample_gamma(p.shape, p.rate, rng);
    if rng.random::<bool>() {
        g
    } else {
        -g
    }
}

/// Draw from `N(mean, var)` restricted to `(lo, hi)`; either bound may be
/// infinite.
pub fn sample_truncated_normal<R: Rng + ?Sized>(
    mean: f64,
    var: f64,
    lo: f64,
    hi: f64,
    rng: &mut R,
) -> Result<f64> {
    if !(var > 0.0 && var.is_finite()) {
        return Err(Error::param("var", format!("must be positive, got {var}")));
    }
    if !(lo < hi) {
        return Err(Error::EmptyInterval { lo, hi });
    }
    let s = var.sqrt();
    Ok(mean + s * sample_truncated_normal_std((lo - mean) / s, (hi - mean) / s, rng))
}

/// Standard normal restricted to `(a, b)`, `a < b`, by exact rejection:
/// plain normal proposals when the interval holds a lot of mass, uniform
/// proposals on short intervals, and translated exponential proposals in
/// the tails.
pub(crate) fn sample_truncated_normal_std<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    debug_assert!(a < b);
    if b <= 0.0 {
        return -sample_truncated_normal_std(-b, -a, rng);
    }
    // From here on b > 0.
    if a <= 0.0 {
        if a == f64::NEG_INFINITY || b == f64::INFINITY || b - a >= (2.0 * PI).sqrt() {
            loop {
                let z: f64 = StandardNormal.sample(rng);
                if z > a && z < b {
                    return z;
                }
            }
        }
        loop {
            let z = a + (b - a) * rng.random::<f64>();
            if rng.random::<f64>() <= (-0.5 * z * z).exp() {
                return z;
            }
        }
    }
    // a > 0: lower tail bound.
    let root = (a * a + 4.0).sqrt();
    let alpha = 0.5 * (a + root);
    let uniform_cutoff = a + (2.0 / (a + root)) * (0.25 * (a * a - a * root) + 0.5).exp();
    if b < uniform_cutoff {
        loop {
            let z = a + (b - a) * rng.random::<f64>();
            if rng.random::<f64>().ln() <= 0.5 * (a * a - z * z) {
                return z;
            }
        }
    }
    loop {
        let e: f64 = Exp1.sample(rng);
        let z = a + e / alpha;
        if z >= b {
            continue;
        }
        let d = z - alpha;
        if rng.random::<f64>().ln() <= -0.5 * d * d {
            return z;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn mean(v: &[f64]) -> f64 {
        v.iter().sum::<f64>() / v.len() as f64
    }

    #[test]
    fn double_gamma_moments() {
        let p = DoubleGammaParams::new(3.0, 6.0).unwrap();
        let mut rng = RngStream::new(3, 0);
        let t = 100_000;
        let xs: Vec<f64> = (0..t).map(|_| sample_double_gamma(&p, &mut rng)).collect();
        // Var of dG(3,6) = E[g^2] = a(a+1)/b^2 = 1/3.
        let sd = (1.0f64 / 3.0).sqrt();
        assert!(mean(&xs).abs() < 4.0 * sd / (t as f64).sqrt());
        let abs_mean = xs.iter().map(|x| x.abs()).sum::<f64>() / t as f64;
        assert!((abs_mean - 0.5).abs() < 0.015);
    }

    #[test]
    fn truncated_normal_far_tail() {
        let mut rng = RngStream::new(4, 0);
        let n = 100_000;
        let xs: Vec<f64> = (0..n)
            .map(|_| sample_truncated_normal(0.0, 1.0, 5.0, f64::INFINITY, &mut rng).unwrap())
            .collect();
        assert!(xs.iter().all(|&x| x >= 5.0));
        // E[Z | Z > 5] = φ(5) / Φ(-5) = 5.186_503_...
        let phi5 = (-12.5f64).exp() / (2.0 * PI).sqrt();
        let sf5 = 2.866_515_718_791_939e-7;
        let want = phi5 / sf5;
        assert!((mean(&xs) - want).abs() / want < 0.02);
    }

    #[test]
    fn truncated_normal_short_interval() {
        let mut rng = RngStream::new(5, 0);
        for _ in 0..10_000 {
            let x = sample_truncated_normal(3.0, 4.0, 2.0, 2.5, &mut rng).unwrap();
            assert!(x > 2.0 && x < 2.5);
        }
    }

    #[test]
    fn truncated_normal_mirror_tail() {
        let mut rng = RngStream::new(6, 0);
        for _ in 0..10_000 {
            let x = sample_truncated_normal(0.0, 1.0, f64::NEG_INFINITY, -30.0, &mut rng).unwrap();
            assert!(x < -30.0 && x > -31.0);
            let y = sample_truncated_normal(0.0, 1.0, 40.0, 40.0001, &mut rng).unwrap();
            assert!(y > 40.0 && y < 40.0001);
        }
    }

    #[test]
    fn truncated_normal_rejects_bad_input() {
        let mut rng = RngStream::new(7, 0);
        assert!(matches!(
            sample_truncated_normal(0.0, 1.0, 1.0, 1.0, &mut rng),
            Err(Error::EmptyInterval { .. })
        ));
        assert!(sample_truncated_normal(0.0, 0.0, 0.0, 1.0, &mut rng).is_err());
    }

    #[test]
    fn inverse_gamma_mean() {
        let mut rng = RngStream::new(8, 0);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| sample_inverse_gamma(4.0, 3.0, &mut rng)).collect();
        assert!((mean(&xs) - 1.0).abs() < 0.03);
    }
}
