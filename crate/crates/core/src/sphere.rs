//! Closed-form geometry of the unit sphere `S^n` embedded in `R^{n+1}`.
//!
//! Functions here work on raw embedding coordinates and assume their inputs
//! are unit vectors; validation happens in [`crate::manifold`].

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::math::{self, sinc_inv, theta_cot};

/// Minimum clearance `pi - dist(x, y)` accepted by [`log`].
pub const CUT_LOCUS_TOL: f64 = 1e-8;

/// Geodesic distance `2 atan2(|x - y|, |x + y|)`: accurate over all of
/// `[0, pi]` and exactly symmetric.
pub fn angle(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    2.0 * math::atan2((x - y).norm(), (x + y).norm())
}

pub fn exp(x: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
    let t = v.norm();
    if t == 0.0 {
        return x.clone();
    }
    let p = x * math::cos(t) + v * (1.0 / sinc_inv(t));
    let norm = p.norm();
    p / norm
}

pub fn log(x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    let c = x.dot(y);
    let w = y - x * c;
    let theta = math::atan2(w.norm(), c);
    let clearance = core::f64::consts::PI - theta;
    if clearance < CUT_LOCUS_TOL {
        return Err(Error::CutLocus { clearance });
    }
    let v = w * sinc_inv(theta);
    Ok(tangent_projection(x, &v))
}

pub fn tangent_projection(x: &DVector<f64>, w: &DVector<f64>) -> DVector<f64> {
    w - x * x.dot(w)
}

/// Normalised `x + v`; agrees with `exp` to second order.
pub fn retract(x: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
    let p = x + v;
    let norm = p.norm();
    p / norm
}

/// `(Id - x x^T)`, the orthogonal projector onto the tangent space.
pub fn tangent_projector(x: &DVector<f64>) -> DMatrix<f64> {
    DMatrix::identity(x.len(), x.len()) - x * x.transpose()
}

/// Half the Hessian of `dist^2(., y)` at `x` in the ambient chart:
/// `u u^T + theta cot(theta) (Id - x x^T - u u^T)`.
pub fn half_hessian_dist_sq(x: &DVector<f64>, y: &DVector<f64>) -> Result<DMatrix<f64>> {
    let l = log(x, y)?;
    let theta = l.norm();
    let g = theta_cot(theta);
    let mut h = tangent_projector(x) * g;
    if theta > 0.0 {
        let u = &l / theta;
        h += (&u * u.transpose()) * (1.0 - g);
    }
    Ok(h)
}

/// `(Id - x x^T) X F(X, x) lambda`, with `F = Diag(theta_i / sin(theta_i))`.
pub fn first_moment(
    refs: &[&DVector<f64>],
    x: &DVector<f64>,
    weights: &[f64],
) -> Result<DVector<f64>> {
    let mut acc = DVector::zeros(x.len());
    for (xi, &w) in refs.iter().zip(weights) {
        let theta = angle(x, xi);
        let clearance = core::f64::consts::PI - theta;
        if clearance < CUT_LOCUS_TOL {
            return Err(Error::CutLocus { clearance });
        }
        acc += *xi * (w * sinc_inv(theta));
    }
    Ok(tangent_projection(x, &acc))
}

/// Orthonormal basis of the tangent space at `x` (columns), taken from the
/// Householder reflection that maps `e_0` to `±x`.
pub fn tangent_basis(x: &DVector<f64>) -> DMatrix<f64> {
    let dim = x.len();
    let mut w = x.clone();
    if x[0] > 0.0 {
        w[0] -= 1.0;
    } else {
        w[0] += 1.0;
    }
    let ww = w.dot(&w);
    let reflection = if ww > 0.0 {
        DMatrix::identity(dim, dim) - (&w * w.transpose()) * (2.0 / ww)
    } else {
        DMatrix::identity(dim, dim)
    };
    reflection.columns(1, dim - 1).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, PI};

    fn e(dim: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(dim);
        v[i] = 1.0;
        v
    }

    #[test]
    fn quarter_great_circle() {
        let y = exp(&e(3, 0), &(e(3, 1) * FRAC_PI_2));
        assert!((y - e(3, 1)).norm() < 1e-15);
        let l = log(&e(3, 0), &e(3, 1)).unwrap();
        assert!((l - e(3, 1) * FRAC_PI_2).norm() < 1e-15);
        assert!((angle(&e(3, 0), &e(3, 1)) - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn antipode_is_cut_locus() {
        let x = e(3, 0);
        assert!(matches!(log(&x, &-&x), Err(Error::CutLocus { .. })));
        assert!((angle(&x, &-&x) - PI).abs() < 1e-15);
    }

    #[test]
    fn basis_is_orthonormal_and_tangent() {
        for x in [
            e(4, 0),
            -e(4, 0),
            DVector::from_vec(vec![0.5, -0.5, 0.5, 0.5]),
        ] {
            let b = tangent_basis(&x);
            assert!((b.transpose() * &b - DMatrix::identity(3, 3)).norm() < 1e-14);
            assert!((b.transpose() * &x).norm() < 1e-14);
        }
    }

    #[test]
    fn hessian_kills_base_point() {
        let x = e(3, 0);
        let y = DVector::from_vec(vec![0.6, 0.0, 0.8]);
        let h = half_hessian_dist_sq(&x, &y).unwrap();
        assert!((&h * &x).norm() < 1e-15);
        assert!((&h - h.transpose()).norm() < 1e-15);
    }
}
