use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::config::ReferenceConfiguration;
use crate::error::{Error, Result};
use crate::linalg::{right_svd, symmetric_eigen};
use crate::manifold::{Manifold, Point, TangentVector};
use crate::{euclidean, hyperbolic, sphere};

/// Threshold for declaring a singular value zero: `s < max(abs, rel * s_max)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankTolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for RankTolerance {
    fn default() -> Self {
        RankTolerance {
            rel: 1e-8,
            abs: 1e-9,
        }
    }
}

impl RankTolerance {
    pub fn threshold(&self, s_max: f64) -> f64 {
        self.abs.max(self.rel * s_max)
    }
}

/// `Z(x) = [log_x(x_0), ..., log_x(x_k)]` in the orthonormal tangent frame at `x`.
pub fn z_matrix(cfg: &ReferenceConfiguration, x: &Point) -> Result<DMatrix<f64>> {
    let basis = x.tangent_basis();
    let mut z = DMatrix::zeros(cfg.manifold().dim(), cfg.len());
    for (i, xi) in cfg.points().iter().enumerate() {
        z.set_column(i, &basis.coords(&x.log(xi)?));
    }
    Ok(z)
}

/// First weighted moment `sum_i lambda_i log_x(x_i)` through the closed forms
/// `(Id - x x^T) X F lambda` (sphere) and `(Id + x x^T J) X F_* lambda` (hyperboloid).
pub fn first_moment(
    cfg: &ReferenceConfiguration,
    x: &Point,
    lambda: &[f64],
) -> Result<TangentVector> {
    if lambda.len() != cfg.len() {
        return Err(Error::InvalidArgument(
            "weight vector length differs from configuration size",
        ));
    }
    let refs = cfg.coords();
    let v = match cfg.manifold() {
        Manifold::Sphere(_) => sphere::first_moment(&refs, x.coords(), lambda)?,
        Manifold::Hyperbolic(_) => hyperbolic::first_moment(&refs, x.coords(), lambda),
        Manifold::Euclidean(_) => euclidean::first_moment(&refs, x.coords(), lambda),
    };
    Ok(x.project_tangent(&v))
}

/// Result of the smallest-singular-value test for EBS membership.
#[derive(Debug, Clone)]
pub struct EbsMembership {
    pub point: Point,
    /// Singular values of `Z(x)`, descending, one per reference point.
    pub singular_values: Vec<f64>,
    pub smallest_singular_value: f64,
    /// Orthonormal basis of the dual weight space (right kernel of `Z(x)`).
    pub dual_basis: Vec<DVector<f64>>,
    pub threshold: f64,
    pub is_member: bool,
}

impl EbsMembership {
    /// Number of vanishing singular values.
    pub fn vanishing(&self) -> usize {
        self.dual_basis.len()
    }
}

/// Decide EBS membership from the SVD of `Z(x)`.
pub fn ebs_membership(
    cfg: &ReferenceConfiguration,
    x: &Point,
    tol: RankTolerance,
) -> Result<EbsMembership> {
    let z = z_matrix(cfg, x)?;
    let svd = right_svd(&z);
    let threshold = tol.threshold(svd.largest());
    let dual_basis: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s < threshold)
        .map(|(i, _)| svd.v.column(i).into_owned())
        .collect();
    Ok(EbsMembership {
        point: x.clone(),
        smallest_singular_value: svd.smallest(),
        singular_values: svd.singular_values,
        is_member: !dual_basis.is_empty(),
        dual_basis,
        threshold,
    })
}

/// Gram matrix `Omega_ij = <log_x(x_i), log_x(x_j)>` and its determinant.
pub fn omega_matrix(cfg: &ReferenceConfiguration, x: &Point) -> Result<(DMatrix<f64>, f64)> {
    let z = z_matrix(cfg, x)?;
    let omega = z.transpose() * z;
    let det = omega.clone().determinant();
    Ok((omega, det))
}

/// Eigenvalues of the reference covariance `Sigma(x) = Z Z^T`, descending,
/// padded with zeros to length `k + 1`.
pub fn covariance_eigenvalues(cfg: &ReferenceConfiguration, x: &Point) -> Result<Vec<f64>> {
    let z = z_matrix(cfg, x)?;
    let (mut values, _) = symmetric_eigen(&(&z * z.transpose()));
    values.reverse();
    values.resize(cfg.len().max(values.len()), 0.0);
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;

    fn s5(c: &[f64]) -> Point {
        Manifold::Sphere(5)
            .project(DVector::from_column_slice(c))
            .unwrap()
    }

    fn axes() -> ReferenceConfiguration {
        ReferenceConfiguration::new(vec![
            s5(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
            s5(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0]),
            s5(&[0.0, 0.0, 1.0, 0.0, 0.0, 0.0]),
        ])
        .unwrap()
    }

    #[test]
    fn centroid_of_axes_is_member() {
        let x = s5(&[1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
        let m = ebs_membership(&axes(), &x, RankTolerance::default()).unwrap();
        assert!(m.is_member);
        assert_eq!(m.vanishing(), 1);
        let lam = &m.dual_basis[0];
        assert!((lam[0] - lam[1]).abs() < 1e-12 && (lam[1] - lam[2]).abs() < 1e-12);
    }

    #[test]
    fn off_span_axis_is_not_member() {
        let x = s5(&[0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let m = ebs_membership(&axes(), &x, RankTolerance::default()).unwrap();
        assert!(!m.is_member);
        // Every log has length pi/2 and the three are orthogonal.
        assert!((m.smallest_singular_value - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn reference_point_has_unit_dual_weight() {
        let cfg = axes();
        let x = cfg.points()[0].clone();
        let z = z_matrix(&cfg, &x).unwrap();
        assert!(z.column(0).norm() == 0.0);
        assert!((z.column(1).norm() - FRAC_PI_2).abs() < 1e-15);
        let m = ebs_membership(&cfg, &x, RankTolerance::default()).unwrap();
        let lam = &m.dual_basis[0];
        assert!((lam[0].abs() - 1.0).abs() < 1e-12);
        let (omega, det) = omega_matrix(&cfg, &x).unwrap();
        assert!(det.abs() < 1e-15);
        assert!(omega.row(0).norm() == 0.0);
    }

    #[test]
    fn omega_on_great_circle_midpoint() {
        let cfg = ReferenceConfiguration::new(vec![
            s5(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
            s5(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0]),
        ])
        .unwrap();
        let x = s5(&[1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let (omega, det) = omega_matrix(&cfg, &x).unwrap();
        let q = (FRAC_PI_2 / 2.0).powi(2);
        let expected = DMatrix::from_row_slice(2, 2, &[q, -q, -q, q]);
        assert!((omega - expected).norm() < 1e-14);
        assert!(det.abs() < 1e-14);
    }
}
