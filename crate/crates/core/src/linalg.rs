//! Small dense linear-algebra helpers on top of nalgebra.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

/// Singular values (descending, one per column) with the matching right
/// singular vectors as columns of `v`.
#[derive(Debug, Clone)]
pub struct RightSvd {
    pub singular_values: Vec<f64>,
    pub v: DMatrix<f64>,
}

impl RightSvd {
    pub fn largest(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn smallest(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }
}

/// SVD returning a full set of `ncols` singular values and right singular
/// vectors, padding short matrices with zero rows.
pub fn right_svd(m: &DMatrix<f64>) -> RightSvd {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return RightSvd {
            singular_values: Vec::new(),
            v: DMatrix::zeros(0, 0),
        };
    }
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let singular_values = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut v = DMatrix::zeros(cols, cols);
    for (dst, &src) in order.iter().enumerate() {
        v.set_column(dst, &v_t.row(src).transpose());
    }
    RightSvd { singular_values, v }
}

/// Number of singular values above `max(abs_floor, rel * s_max)`.
pub fn numeric_rank(m: &DMatrix<f64>, rel: f64, abs_floor: f64) -> usize {
    let svd = right_svd(m);
    let thr = abs_floor.max(rel * svd.largest());
    svd.singular_values.iter().filter(|&&s| s > thr).count()
}

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Stack points as the columns of a matrix.
pub fn columns(vectors: &[&DVector<f64>]) -> DMatrix<f64> {
    let rows = vectors.first().map_or(0, |v| v.len());
    let mut m = DMatrix::zeros(rows, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wide_matrix_gets_full_right_basis() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, 1.0]);
        let svd = right_svd(&m);
        assert_eq!(svd.singular_values.len(), 3);
        assert!(svd.smallest() < 1e-12);
        let kernel = svd.v.column(2);
        assert!((&m * kernel).norm() < 1e-12);
        assert!(svd.singular_values[0] >= svd.singular_values[1]);
    }

    #[test]
    fn rank_of_dependent_columns() {
        let m = DMatrix::from_column_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0]);
        assert_eq!(numeric_rank(&m, 1e-10, 1e-12), 2);
    }

    #[test]
    fn eigen_is_ascending() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let (vals, vecs) = symmetric_eigen(&m);
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
        assert!((&m * vecs.column(1) - vecs.column(1) * 3.0).norm() < 1e-12);
    }
}
