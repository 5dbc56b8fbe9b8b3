//! Proximity operator of `w ‖·‖∞`.
//!
//! `prox(x) = argmin_u w ‖u‖∞ + ½ ‖x - u‖²` clamps every coordinate to
//! `[-φ, φ]`, where `φ = max(0, max_j φ_j)` and
//! `φ_j = (Σ_{k≤j} d_k ε_k - w) / Σ_{k≤j} d_k` runs over the distinct
//! magnitudes `ε_1 > ε_2 > …` (multiplicities `d_k`) taken in decreasing
//! order.

use crate::coder::CodingProblem;
use crate::error::{check_len, Result};
use serde::{Deserialize, Serialize};

/// The threshold of the ℓ∞ prox with its intermediate quantities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProxThreshold {
    pub phi: f64,
    /// Candidate levels `φ_j`, one per distinct magnitude.
    pub levels: Vec<f64>,
    /// Distinct magnitudes, strictly decreasing.
    pub magnitudes: Vec<f64>,
    pub multiplicities: Vec<usize>,
}

/// Computes the threshold with explicit grouping of equal magnitudes.
pub fn linf_threshold(x: &[f64], weight: f64) -> ProxThreshold {
    let mut mags: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));

    let mut magnitudes: Vec<f64> = Vec::new();
    let mut multiplicities: Vec<usize> = Vec::new();
    for m in mags {
        match magnitudes.last() {
            Some(&last) if last == m => *multiplicities.last_mut().unwrap() += 1,
            _ => {
                magnitudes.push(m);
                multiplicities.push(1);
            }
        }
    }

    let mut levels = Vec::with_capacity(magnitudes.len());
    let (mut count, mut sum) = (0usize, 0.0);
    for (&eps, &d) in magnitudes.iter().zip(&multiplicities) {
        count += d;
        sum += d as f64 * eps;
        levels.push((sum - weight) / count as f64);
    }
    let phi = levels.iter().copied().fold(0.0, f64::max);
    ProxThreshold {
        phi,
        levels,
        magnitudes,
        multiplicities,
    }
}

/// Scan over sorted magnitudes without grouping. The maximum over all
/// prefixes equals the maximum over group ends, so ties need no special
/// handling here.
fn threshold_fast(x: &[f64], weight: f64, scratch: &mut Vec<f64>) -> f64 {
    scratch.clear();
    scratch.extend(x.iter().map(|v| v.abs()));
    scratch.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut sum = 0.0;
    let mut phi: f64 = 0.0;
    for (k, m) in scratch.iter().enumerate() {
        sum += m;
        let level = (sum - weight) / (k + 1) as f64;
        if level > phi {
            phi = level;
        }
    }
    phi
}

/// `prox_{w‖·‖∞}(x)` for `w = λ δ`.
pub fn prox_linf(x: &[f64], weight: f64) -> Vec<f64> {
    let mut out = x.to_vec();
    prox_linf_in_place(&mut out, weight, &mut Vec::with_capacity(x.len()));
    out
}

/// In-place variant reusing a scratch buffer; used inside the samplers.
pub fn prox_linf_in_place(x: &mut [f64], weight: f64, scratch: &mut Vec<f64>) {
    debug_assert!(weight >= 0.0, "prox weight must be nonnegative");
    if weight <= 0.0 {
        return;
    }
    let phi = threshold_fast(x, weight, scratch);
    for v in x.iter_mut() {
        if v.abs() >= phi {
            *v = phi.copysign(*v);
        }
    }
}

/// Euclidean projection onto the ℓ1 ball of the given radius.
pub fn project_l1_ball(v: &[f64], radius: f64) -> Vec<f64> {
    let l1: f64 = v.iter().map(|a| a.abs()).sum();
    if l1 <= radius {
        return v.to_vec();
    }
    let mut u: Vec<f64> = v.iter().map(|a| a.abs()).collect();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - radius) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        } else {
            break;
        }
    }
    v.iter()
        .map(|&a| (a.abs() - theta).max(0.0).copysign(a))
        .collect()
}

/// Independent route to the same operator via Moreau decomposition:
/// `prox_{w‖·‖∞}(x) = x - w Π_{B1}(x / w)`.
pub fn prox_linf_oracle(x: &[f64], weight: f64) -> Vec<f64> {
    if weight <= 0.0 {
        return x.to_vec();
    }
    let scaled: Vec<f64> = x.iter().map(|v| v / weight).collect();
    let proj = project_l1_ball(&scaled, 1.0);
    x.iter().zip(proj).map(|(a, p)| a - weight * p).collect()
}

/// First-order approximation of the prox of the full negative log
/// conditional posterior `‖y - Hx‖²/(2σ²) + λ‖x‖∞`: a gradient descent step
/// of size `δ` on the quadratic followed by the ℓ∞ prox with weight `λδ/2`.
pub fn gradient_step_prox(
    x: &[f64],
    problem: &CodingProblem,
    sigma2: f64,
    lambda: f64,
    delta: f64,
) -> Result<Vec<f64>> {
    check_len(problem.n(), x.len())?;
    let residual = problem.residual(x);
    let mut out = x.to_vec();
    problem.gradient_step_in_place(&mut out, &residual, delta / sigma2);
    let mut scratch = Vec::with_capacity(x.len());
    prox_linf_in_place(&mut out, lambda * delta / 2.0, &mut scratch);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_vector_is_fixed() {
        assert_eq!(prox_linf(&[0.0, 0.0, 0.0], 2.0), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn scalar_is_soft_threshold() {
        assert_eq!(prox_linf(&[2.0], 1.0), vec![1.0]);
        assert_eq!(prox_linf(&[-0.5], 1.0), vec![0.0]);
    }

    #[test]
    fn decreasing_order_example() {
        assert_eq!(prox_linf(&[3.0, 1.0], 1.0), vec![2.0, 1.0]);
        assert_eq!(prox_linf_oracle(&[3.0, 1.0], 1.0), vec![2.0, 1.0]);
        // Ascending order would have produced φ = max(1 - 1, (4 - 1)/2) = 1.5.
        let t = linf_threshold(&[3.0, 1.0], 1.0);
        assert_eq!(t.levels, vec![2.0, 1.5]);
        assert_eq!(t.phi, 2.0);
    }

    #[test]
    fn duplicate_magnitudes() {
        let t = linf_threshold(&[2.0, 2.0, -2.0], 1.0);
        assert_eq!(t.magnitudes, vec![2.0]);
        assert_eq!(t.multiplicities, vec![3]);
        let phi = 5.0 / 3.0;
        assert!((t.phi - phi).abs() < 1e-15);
        let r = prox_linf(&[2.0, 2.0, -2.0], 1.0);
        let o = prox_linf_oracle(&[2.0, 2.0, -2.0], 1.0);
        for (a, b) in r.iter().zip(&o) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((r[2] + phi).abs() < 1e-15);
    }

    #[test]
    fn large_weight_shrinks_to_zero() {
        let x = [0.5, -1.0, 0.25];
        assert!(prox_linf(&x, 1.75).iter().all(|&v| v == 0.0));
        assert!(prox_linf_oracle(&x, 1.75).iter().all(|&v| v.abs() < 1e-15));
    }

    #[test]
    fn multiplicities_sum_to_dim() {
        let x = [1.0, -1.0, 0.5, 3.0, 0.5, 0.5];
        let t = linf_threshold(&x, 0.7);
        assert_eq!(t.multiplicities.iter().sum::<usize>(), x.len());
        assert!(t.magnitudes.windows(2).all(|w| w[0] > w[1]));
        let mut s = Vec::new();
        assert_eq!(t.phi, threshold_fast(&x, 0.7, &mut s));
    }

    #[test]
    fn projection_lands_on_sphere() {
        let p = project_l1_ball(&[3.0, -1.0, 0.5], 1.0);
        let l1: f64 = p.iter().map(|v| v.abs()).sum();
        assert!((l1 - 1.0).abs() < 1e-14);
        assert!(p[0] > 0.0 && p[1] <= 0.0);
    }
}
