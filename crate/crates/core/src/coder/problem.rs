use crate::error::{check_len, Error, Result};
use nalgebra::{DMatrix, DVector};

/// Observations `y`, dictionary `H` and the gamma hyperprior `(a, b)` on
/// the democratic rate.
#[derive(Debug, Clone)]
pub struct CodingProblem {
    y: DVector<f64>,
    h: DMatrix<f64>,
    hyper_a: f64,
    hyper_b: f64,
    col_norms2: Vec<f64>,
}

impl CodingProblem {
    pub const DEFAULT_HYPER: f64 = 1e-3;

    pub fn new(y: DVector<f64>, h: DMatrix<f64>) -> Result<Self> {
        Self::with_hyper(y, h, Self::DEFAULT_HYPER, Self::DEFAULT_HYPER)
    }

    pub fn with_hyper(y: DVector<f64>, h: DMatrix<f64>, hyper_a: f64, hyper_b: f64) -> Result<Self> {
        let (m, n) = h.shape();
        if m == 0 || n == 0 {
            return Err(Error::Empty("dictionary"));
        }
        check_len(m, y.len())?;
        if !(hyper_a > 0.0 && hyper_a.is_finite()) {
            return Err(Error::param("hyper_a", format!("must be positive, got {hyper_a}")));
        }
        if !(hyper_b > 0.0 && hyper_b.is_finite()) {
            return Err(Error::param("hyper_b", format!("must be positive, got {hyper_b}")));
        }
        if y.iter().chain(h.iter()).any(|v| !v.is_finite()) {
            return Err(Error::param("problem", "non-finite entry"));
        }
        let col_norms2: Vec<f64> = (0..n).map(|j| h.column(j).norm_squared()).collect();
        if let Some(j) = col_norms2.iter().position(|&c| c == 0.0) {
            return Err(Error::param("H", format!("column {j} is zero")));
        }
        Ok(CodingProblem { y, h, hyper_a, hyper_b, col_norms2 })
    }

    /// Number of coefficients.
    pub fn n(&self) -> usize {
        self.h.ncols()
    }

    /// Number of observations.
    pub fn m(&self) -> usize {
        self.h.nrows()
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn h(&self) -> &DMatrix<f64> {
        &self.h
    }

    /// Swaps in new observations, keeping `H` and the hyperprior.
    pub fn set_y(&mut self, y: DVector<f64>) -> Result<()> {
        check_len(self.m(), y.len())?;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("y", "non-finite entry"));
        }
        self.y = y;
        Ok(())
    }

    pub fn hyper_a(&self) -> f64 {
        self.hyper_a
    }

    pub fn hyper_b(&self) -> f64 {
        self.hyper_b
    }

    pub fn col_norm2(&self, j: usize) -> f64 {
        self.col_norms2[j]
    }

    /// Column `j` of `H` (storage is column-major).
    pub fn column(&self, j: usize) -> &[f64] {
        let m = self.m();
        &self.h.as_slice()[j * m..(j + 1) * m]
    }

    /// `y - Hx`.
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        let mut r: Vec<f64> = self.y.iter().copied().collect();
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                for (ri, hij) in r.iter_mut().zip(self.column(j)) {
                    *ri -= xj * hij;
                }
            }
        }
        r
    }

    pub fn residual_norm2(&self, x: &[f64]) -> f64 {
        self.residual(x).iter().map(|v| v * v).sum()
    }

    /// `out += step * Hᵀ r`.
    pub fn gradient_step_in_place(&self, out: &mut [f64], residual: &[f64], step: f64) {
        for (j, o) in out.iter_mut().enumerate() {
            let dot: f64 = self.column(j).iter().zip(residual).map(|(a, b)| a * b).sum();
            *o += step * dot;
        }
    }

    /// `Hx`.
    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.m()];
        for (j, &xj) in x.iter().enumerate() {
            for (o, hij) in out.iter_mut().zip(self.column(j)) {
                *o += xj * hij;
            }
        }
        out
    }
}
