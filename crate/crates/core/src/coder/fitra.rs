use crate::democratic::linf_norm;
use crate::error::{check_len, Error, Result};
use crate::prox::prox_linf_in_place;
use serde::{Deserialize, Serialize};

use super::estimators::{EstimatorKind, EstimatorResult};
use super::problem::CodingProblem;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitraOutput {
    pub result: EstimatorResult,
    pub iterations: usize,
    /// Objective after each iteration, starting with the initial point.
    pub objective: Vec<f64>,
}

/// `‖H‖₂²` by power iteration on `HᵀH`, inflated by a hair so that `1/L`
/// is a safe step.
pub fn operator_norm_sq(problem: &CodingProblem) -> f64 {
    let n = problem.n();
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 1e-3 * i as f64).collect();
    let mut est = 0.0;
    for _ in 0..500 {
        let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        v.iter_mut().for_each(|a| *a /= nv);
        let hv = problem.forward(&v);
        let mut w = vec![0.0; n];
        problem.gradient_step_in_place(&mut w, &hv, 1.0);
        let next = w.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>();
        v = w;
        if (next - est).abs() <= 1e-12 * next {
            est = next;
            break;
        }
        est = next;
    }
    est * (1.0 + 1e-6)
}

fn objective(problem: &CodingProblem, x: &[f64], beta: f64) -> f64 {
    0.5 * problem.residual_norm2(x) + 0.5 * beta * linf_norm(x)
}

/// Minimize `½‖y - Hx‖² + (β/2)‖x‖∞` by monotone accelerated proximal
/// gradient from `x = 0`.
pub fn fitra(problem: &CodingProblem, beta: f64, max_iters: usize, tol: f64) -> Result<FitraOutput> {
    fitra_from(problem, beta, max_iters, tol, &vec![0.0; problem.n()])
}

pub fn fitra_from(
    problem: &CodingProblem,
    beta: f64,
    max_iters: usize,
    tol: f64,
    init: &[f64],
) -> Result<FitraOutput> {
    check_len(problem.n(), init.len())?;
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::param("beta", format!("must be nonnegative, got {beta}")));
    }
    if max_iters == 0 {
        return Err(Error::param("max_iters", "must be at least 1"));
    }
    let n = problem.n();
    let l = operator_norm_sq(problem);
    let w = 0.5 * beta / l;
    let mut x = init.to_vec();
    let mut v = x.clone();
    let mut z = vec![0.0; n];
    let mut scratch = Vec::with_capacity(n);
    let mut t = 1.0f64;
    let mut f = objective(problem, &x, beta);
    let mut trace = vec![f];
    let mut iters = 0;
    while iters < max_iters {
        iters += 1;
        z.copy_from_slice(&v);
        let r = problem.residual(&v);
        problem.gradient_step_in_place(&mut z, &r, 1.0 / l);
        prox_linf_in_place(&mut z, w, &mut scratch);
        let fz = objective(problem, &z, beta);
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let prev = x.clone();
        let took_z = fz <= f;
        let f_prev = f;
        if took_z {
            x.copy_from_slice(&z);
            f = fz;
        }
        for i in 0..n {
            v[i] = x[i] + (t / t_next) * (z[i] - x[i]) + ((t - 1.0) / t_next) * (x[i] - prev[i]);
        }
        t = t_next;
        trace.push(f);
        if took_z && (f_prev - f).abs() <= tol * f_prev.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(FitraOutput {
        result: EstimatorResult { x_hat: x, kind: EstimatorKind::Fitra, score: None },
        iterations: iters,
        objective: trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};

    #[test]
    fn scalar_soft_threshold() {
        let p = CodingProblem::new(DVector::from_vec(vec![2.0]), DMatrix::from_element(1, 1, 1.0)).unwrap();
        let out = fitra(&p, 2.0, 500, 1e-14).unwrap();
        assert!((out.result.x_hat[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn unregularized_recovers_ls() {
        let h = DMatrix::from_row_slice(3, 3, &[2.0, 0.5, 0.0, 0.1, 1.0, 0.3, 0.0, -0.4, 1.5]);
        let x0 = [0.7, -1.2, 0.4];
        let y = DVector::from_vec(CodingProblem::new(DVector::zeros(3), h.clone()).unwrap().forward(&x0));
        let p = CodingProblem::new(y, h).unwrap();
        let out = fitra(&p, 0.0, 5000, 1e-16).unwrap();
        for (a, b) in out.result.x_hat.iter().zip(x0) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn objective_is_monotone() {
        let h = DMatrix::from_fn(4, 6, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0 + 0.1 * j as f64);
        let p = CodingProblem::new(DVector::from_vec(vec![1.0, -2.0, 0.5, 3.0]), h).unwrap();
        let out = fitra(&p, 0.7, 300, 0.0).unwrap();
        assert!(out.objective.windows(2).all(|w| w[1] <= w[0]));
    }
}
