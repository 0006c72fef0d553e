//! Hyperbolic space `H^n` as the upper sheet of the hyperboloid
//! `<x, x>_* = -1`, `x_0 > 0`, in Minkowski space `R^{1,n}`.
//!
//! The pairing is `<x, y>_* = x^T J y` with `J = diag(-1, Id_n)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::math::{self, sinhc_inv, theta_coth};

/// Minkowski pairing `<x, y>_*`.
pub fn minkowski(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    x.dot(y) - 2.0 * x[0] * y[0]
}

/// `J w`.
pub fn lower(w: &DVector<f64>) -> DVector<f64> {
    let mut v = w.clone();
    v[0] = -v[0];
    v
}

/// `J = diag(-1, Id_n)`.
pub fn metric(dim: usize) -> DMatrix<f64> {
    let mut j = DMatrix::identity(dim, dim);
    j[(0, 0)] = -1.0;
    j
}

/// Orthogonal projection `w + <w, x>_* x` onto the tangent space at `x`.
pub fn tangent_projection(x: &DVector<f64>, w: &DVector<f64>) -> DVector<f64> {
    w + x * minkowski(w, x)
}

/// `Id + x x^T J`.
pub fn tangent_projector(x: &DVector<f64>) -> DMatrix<f64> {
    DMatrix::identity(x.len(), x.len()) + x * lower(x).transpose()
}

/// Minkowski norm of a tangent (space-like) vector.
pub fn tangent_norm(v: &DVector<f64>) -> f64 {
    math::sqrt(minkowski(v, v).max(0.0))
}

/// Geodesic distance. Near coincident points it is computed as
/// `2 asinh(|x - y|_* / 2)`, which avoids the cancellation in
/// `arccosh(-<x, y>_*)`; both branches are exactly symmetric.
pub fn angle(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let c = (-minkowski(x, y)).max(1.0);
    if c < 2.0 {
        let d = x - y;
        2.0 * math::asinh(0.5 * math::sqrt(minkowski(&d, &d).max(0.0)))
    } else {
        math::acosh(c)
    }
}

pub fn exp(x: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
    let t = tangent_norm(v);
    if t == 0.0 {
        return x.clone();
    }
    let p = x * math::cosh(t) + v * (1.0 / sinhc_inv(t));
    lift(&p)
}

/// Put `p` back on the upper sheet by recomputing its time coordinate from
/// the spatial part. Unlike rescaling, this stays accurate far from `e_0`.
pub fn lift(p: &DVector<f64>) -> DVector<f64> {
    let mut q = p.clone();
    let s = p.rows(1, p.len() - 1).norm_squared();
    q[0] = math::sqrt(1.0 + s);
    q
}

/// Rescale a time-like vector onto the upper sheet.
pub fn renormalize(p: &DVector<f64>) -> DVector<f64> {
    let q = -minkowski(p, p);
    let s = math::sqrt(q.max(f64::MIN_POSITIVE));
    if p[0] < 0.0 {
        p / -s
    } else {
        p / s
    }
}

pub fn log(x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    let w = tangent_projection(x, y);
    let theta = angle(x, y);
    tangent_projection(x, &(w * sinhc_inv(theta)))
}

pub fn retract(x: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
    renormalize(&(x + v))
}

/// Half the Hessian of `dist^2(., y)` as an operator on the ambient chart:
/// `u u^T J + theta coth(theta) (J + x x^T - u u^T) J`.
pub fn half_hessian_dist_sq(x: &DVector<f64>, y: &DVector<f64>) -> DMatrix<f64> {
    let l = log(x, y);
    let theta = tangent_norm(&l);
    let g = theta_coth(theta);
    let mut h = tangent_projector(x) * g;
    if theta > 0.0 {
        let u = &l / theta;
        h += (&u * lower(&u).transpose()) * (1.0 - g);
    }
    h
}

/// `(Id + x x^T J) X F_*(X, x) lambda`, with `F_* = Diag(theta_i / sinh(theta_i))`.
pub fn first_moment(refs: &[&DVector<f64>], x: &DVector<f64>, weights: &[f64]) -> DVector<f64> {
    let mut acc = DVector::zeros(x.len());
    for (xi, &w) in refs.iter().zip(weights) {
        acc += *xi * (w * sinhc_inv(angle(x, xi)));
    }
    tangent_projection(x, &acc)
}

/// Minkowski-orthonormal tangent frame at `x`: columns `1..=n` of the Lorentz
/// boost sending `e_0` to `x`.
pub fn tangent_basis(x: &DVector<f64>) -> DMatrix<f64> {
    let dim = x.len();
    let n = dim - 1;
    let x0 = x[0];
    let xh = x.rows(1, n);
    let mut b = DMatrix::zeros(dim, n);
    for j in 0..n {
        b[(0, j)] = xh[j];
        for i in 0..n {
            let delta = if i == j { 1.0 } else { 0.0 };
            b[(i + 1, j)] = delta + xh[i] * xh[j] / (1.0 + x0);
        }
    }
    b
}

/// Weierstrass parametrisation `x_hat -> (sqrt(1 + |x_hat|^2), x_hat)`.
pub fn from_weierstrass(xh: &[f64]) -> DVector<f64> {
    let sq: f64 = xh.iter().map(|v| v * v).sum();
    let mut p = DVector::zeros(xh.len() + 1);
    p[0] = math::sqrt(1.0 + sq);
    for (i, &v) in xh.iter().enumerate() {
        p[i + 1] = v;
    }
    p
}

pub fn to_weierstrass(x: &DVector<f64>) -> DVector<f64> {
    x.rows(1, x.len() - 1).into_owned()
}

/// Time-like check used when validating points.
pub fn check_upper_sheet(x: &DVector<f64>) -> Result<()> {
    if x[0] <= 0.0 {
        return Err(Error::InvalidPoint("hyperboloid point must have x0 > 0"));
    }
    Ok(())
}
