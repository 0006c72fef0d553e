//! Flat `R^n`: the zero-curvature reference geometry.

use nalgebra::{DMatrix, DVector};

pub fn exp(x: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
    x + v
}

pub fn log(x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    y - x
}

pub fn dist(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    (y - x).norm()
}

pub fn half_hessian_dist_sq(x: &DVector<f64>) -> DMatrix<f64> {
    DMatrix::identity(x.len(), x.len())
}

pub fn first_moment(refs: &[&DVector<f64>], x: &DVector<f64>, weights: &[f64]) -> DVector<f64> {
    let mut acc = DVector::zeros(x.len());
    for (xi, &w) in refs.iter().zip(weights) {
        acc += (*xi - x) * w;
    }
    acc
}
