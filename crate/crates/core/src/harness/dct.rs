use crate::error::{Error, Result};
use nalgebra::DMatrix;
use rand::Rng;
use std::f64::consts::PI;

/// Orthonormal DCT-II matrix, `C[k][n] = α_k cos(π(2n+1)k / 2N)`.
pub fn dct_matrix(n: usize) -> DMatrix<f64> {
    let nf = n as f64;
    DMatrix::from_fn(n, n, |k, j| {
        let alpha = if k == 0 { (1.0 / nf).sqrt() } else { (2.0 / nf).sqrt() };
        alpha * (PI * (2.0 * j as f64 + 1.0) * k as f64 / (2.0 * nf)).cos()
    })
}

/// `M` distinct rows of the `N×N` orthonormal DCT, chosen uniformly and
/// kept in increasing order. The result satisfies `HHᵀ = I_M`.
pub fn build_dct_frame<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Result<DMatrix<f64>> {
    if m == 0 || n == 0 {
        return Err(Error::param("dims", "M and N must be positive"));
    }
    if m > n {
        return Err(Error::param("M", format!("must not exceed N ({m} > {n})")));
    }
    let full = dct_matrix(n);
    let mut rows = rand::seq::index::sample(rng, n, m).into_vec();
    rows.sort_unstable();
    Ok(full.select_rows(rows.iter()))
}
