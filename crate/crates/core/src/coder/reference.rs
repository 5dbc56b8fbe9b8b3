use crate::error::{Error, Result};
use nalgebra::DMatrix;

use super::estimators::{EstimatorKind, EstimatorResult};
use super::problem::CodingProblem;

/// Minimum-norm least squares via the pseudo-inverse.
pub fn least_squares(problem: &CodingProblem) -> Result<Vec<f64>> {
    let pinv = problem
        .h()
        .clone()
        .pseudo_inverse(1e-12)
        .map_err(|_| Error::Singular("pseudo-inverse"))?;
    Ok((pinv * problem.y()).iter().copied().collect())
}

/// Posterior mean under `x ~ N(0, v I)` and noise variance `σ²`:
/// `(HᵀH/σ² + I/v)⁻¹ Hᵀy/σ²`.
pub fn ridge_mean(problem: &CodingProblem, sigma2: f64, prior_var: f64) -> Result<Vec<f64>> {
    if !(sigma2 > 0.0) {
        return Err(Error::param("sigma2", format!("must be positive, got {sigma2}")));
    }
    if !(prior_var > 0.0) {
        return Err(Error::param("prior_var", format!("must be positive, got {prior_var}")));
    }
    let h = problem.h();
    let n = problem.n();
    let mut a = h.transpose() * h / sigma2;
    a += DMatrix::identity(n, n) / prior_var;
    let b = h.transpose() * problem.y() / sigma2;
    let chol = a.cholesky().ok_or(Error::Singular("ridge normal equations"))?;
    Ok(chol.solve(&b).iter().copied().collect())
}

/// LS, Gaussian-prior MMSE and Gaussian-prior MAP (the latter two coincide).
pub fn reference_solvers(problem: &CodingProblem, sigma2: f64, prior_var: f64) -> Result<Vec<EstimatorResult>> {
    let ls = least_squares(problem)?;
    let ridge = ridge_mean(problem, sigma2, prior_var)?;
    Ok(vec![
        EstimatorResult { x_hat: ls, kind: EstimatorKind::Ls, score: None },
        EstimatorResult { x_hat: ridge.clone(), kind: EstimatorKind::RidgeMmse, score: None },
        EstimatorResult { x_hat: ridge, kind: EstimatorKind::RidgeMap, score: None },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    #[test]
    fn identity_ls_is_y() {
        let p = CodingProblem::new(DVector::from_vec(vec![1.0, -2.0, 3.0]), DMatrix::identity(3, 3)).unwrap();
        let ls = least_squares(&p).unwrap();
        for (a, b) in ls.iter().zip([1.0, -2.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn wide_ridge_tends_to_ls() {
        let h = DMatrix::from_row_slice(2, 3, &[1.0, 0.5, -0.3, 0.2, 1.0, 0.8]);
        let p = CodingProblem::new(DVector::from_vec(vec![0.4, -1.1]), h).unwrap();
        let ls = least_squares(&p).unwrap();
        let r = ridge_mean(&p, 1.0, 1e9).unwrap();
        for (a, b) in ls.iter().zip(&r) {
            assert!((a - b).abs() < 1e-6);
        }
        // Minimum norm: LS lies in the row space.
        let resid = p.residual(&ls);
        assert!(resid.iter().all(|v| v.abs() < 1e-10));
    }
}
