//! SVD-backed rank decisions.
//!
//! A singular value counts as zero when it is below
//! `sigma_max * max(rows, cols) * rel_epsilon`.

use nalgebra::{DMatrix, DVector};

use super::Matrix;

#[derive(Clone, Debug)]
pub struct FloatDecomposition {
    pub rank: usize,
    /// Descending, `min(rows, cols)` values.
    pub singular_values: Vec<f64>,
    /// Orthonormal basis of the kernel.
    pub kernel: Vec<Vec<f64>>,
    /// Orthonormal basis of the row space.
    pub row_space: Vec<Vec<f64>>,
}

fn to_na(m: &Matrix, min_rows: usize) -> DMatrix<f64> {
    let rows = m.rows().max(min_rows);
    DMatrix::from_fn(rows, m.cols(), |r, c| {
        if r < m.rows() {
            *m.get(r, c)
        } else {
            0.0
        }
    })
}

pub fn threshold(sigma_max: f64, rows: usize, cols: usize, rel_epsilon: f64) -> f64 {
    sigma_max * rows.max(cols) as f64 * rel_epsilon
}

pub fn decompose(m: &Matrix, rel_epsilon: f64) -> FloatDecomposition {
    let n = m.cols();
    if n == 0 {
        return FloatDecomposition {
            rank: 0,
            singular_values: vec![],
            kernel: vec![],
            row_space: vec![],
        };
    }
    // zero-padding to at least n rows yields the full right singular basis
    let a = to_na(m, n);
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sigma: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let smax = sigma.first().copied().unwrap_or(0.0);
    let cut = threshold(smax, m.rows(), n, rel_epsilon);
    let rank = if smax == 0.0 {
        0
    } else {
        sigma.iter().filter(|&&s| s > cut).count()
    };
    let row_of = |k: usize| -> Vec<f64> { v_t.row(order[k]).iter().copied().collect() };
    FloatDecomposition {
        rank,
        singular_values: sigma.iter().take(m.rows().min(n)).copied().collect(),
        kernel: (rank..n).map(row_of).collect(),
        row_space: (0..rank).map(row_of).collect(),
    }
}

pub fn rank(m: &Matrix, rel_epsilon: f64) -> usize {
    decompose(m, rel_epsilon).rank
}

/// Minimum-norm least squares through the truncated pseudo-inverse.
pub fn least_squares(m: &Matrix, rhs: &[f64], rel_epsilon: f64) -> (Vec<f64>, f64) {
    let n = m.cols();
    if n == 0 {
        return (vec![], super::norm(rhs));
    }
    let a = to_na(m, 0);
    let b = DVector::from_column_slice(rhs);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = threshold(smax, m.rows(), n, rel_epsilon);
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let mut x = DVector::zeros(n);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if smax > 0.0 && s > cut {
            let coeff = u.column(k).dot(&b) / s;
            x += v_t.row(k).transpose() * coeff;
        }
    }
    let residual = (&a * &x - &b).norm();
    (x.iter().copied().collect(), residual)
}
