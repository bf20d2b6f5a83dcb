//! Minimum-norm least squares for the small systems that show up when a
//! shift has to be written as a combination of spectral directions.

use nalgebra::{DMatrix, DVector};

pub(crate) struct LeastSquares {
    pub coefficients: Vec<f64>,
    pub residual: f64,
}

/// Minimum-norm `c` minimising |Σ c_i columns_i − target|.
pub(crate) fn min_norm_solve(columns: &[Vec<f64>], target: &[f64]) -> LeastSquares {
    let d = target.len();
    let n = columns.len();
    if n == 0 {
        return LeastSquares {
            coefficients: Vec::new(),
            residual: norm(target),
        };
    }
    let m = DMatrix::from_fn(d, n, |r, c| columns[c][r]);
    let b = DVector::from_column_slice(target);
    let svd = m.clone().svd(true, true);
    let max_sv = svd.singular_values.max();
    let eps = max_sv * 1e-12 * (d.max(n) as f64);
    let x = svd
        .solve(&b, eps.max(f64::MIN_POSITIVE))
        .expect("SVD computed with both factors");
    let r = &m * &x - &b;
    LeastSquares {
        coefficients: x.iter().copied().collect(),
        residual: r.norm(),
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
