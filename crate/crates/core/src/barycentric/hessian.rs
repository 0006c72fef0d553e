use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::config::{ReferenceConfiguration, WeightVector};
use super::ebs::{ebs_membership, z_matrix, RankTolerance};
use crate::error::{Error, Result};
use crate::linalg::{numeric_rank, right_svd, symmetric_eigen};
use crate::manifold::{Manifold, Point};
use crate::math::{theta_cot, theta_coth};

/// Eigenvalues with `|e| <= HESSIAN_REL_TOL * |H|` count as zero.
pub const HESSIAN_REL_TOL: f64 = 1e-7;

/// Normalised weighted variance `1/2 sum_i lambda_i dist^2(x, x_i) / sum_j lambda_j`.
pub fn weighted_variance(cfg: &ReferenceConfiguration, x: &Point, w: &WeightVector) -> Result<f64> {
    check_len(cfg, w)?;
    if let Manifold::Sphere(_) = cfg.manifold() {
        for xi in cfg.points() {
            let clearance = x.cut_locus_clearance(xi);
            if clearance < crate::sphere::CUT_LOCUS_TOL {
                return Err(Error::CutLocus { clearance });
            }
        }
    }
    let lam = w.normalized();
    Ok(0.5
        * cfg
            .points()
            .iter()
            .zip(&lam)
            .map(|(xi, l)| {
                let d = x.dist(xi);
                l * d * d
            })
            .sum::<f64>())
}

/// Hessian of the weighted variance in the orthonormal tangent frame at `x`:
/// `c Id + sum_i lambda_i (1 - g_i) u_i u_i^T` with `c = sum_i lambda_i g_i`,
/// `g = theta cot(theta)` on the sphere, `theta coth(theta)` on the hyperboloid
/// and `1` in flat space (normalised weights throughout).
pub fn weighted_variance_hessian(
    cfg: &ReferenceConfiguration,
    x: &Point,
    w: &WeightVector,
) -> Result<DMatrix<f64>> {
    check_len(cfg, w)?;
    let n = cfg.manifold().dim();
    let z = z_matrix(cfg, x)?;
    let lam = w.normalized();
    let g = |theta: f64| match cfg.manifold() {
        Manifold::Sphere(_) => theta_cot(theta),
        Manifold::Hyperbolic(_) => theta_coth(theta),
        Manifold::Euclidean(_) => 1.0,
    };
    let mut c = 0.0;
    let mut h = DMatrix::zeros(n, n);
    for (i, &li) in lam.iter().enumerate() {
        let l = z.column(i);
        let theta = l.norm();
        let gi = g(theta);
        c += li * gi;
        if theta > 0.0 {
            let u = l / theta;
            h += (&u * u.transpose()) * (li * (1.0 - gi));
        }
    }
    Ok(h + DMatrix::identity(n, n) * c)
}

fn check_len(cfg: &ReferenceConfiguration, w: &WeightVector) -> Result<()> {
    if w.len() != cfg.len() {
        return Err(Error::InvalidArgument(
            "weight vector length differs from configuration size",
        ));
    }
    Ok(())
}

/// Signature class of a critical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriticalClass {
    LocalMin,
    Saddle,
    Degenerate,
}

impl CriticalClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            CriticalClass::LocalMin => "local-min",
            CriticalClass::Saddle => "saddle",
            CriticalClass::Degenerate => "degenerate",
        }
    }
}

/// Classify an ascending spectrum; returns the class and the index
/// (number of strictly positive eigenvalues above tolerance).
pub fn classify_spectrum(spectrum: &[f64], rel_tol: f64) -> (CriticalClass, usize) {
    let scale = spectrum.iter().fold(0.0f64, |a, e| a.max(e.abs()));
    let tol = rel_tol * scale;
    let index = spectrum.iter().filter(|&&e| e > tol).count();
    let class = if spectrum.iter().any(|e| e.abs() <= tol) {
        CriticalClass::Degenerate
    } else if index == spectrum.len() {
        CriticalClass::LocalMin
    } else {
        CriticalClass::Saddle
    };
    (class, index)
}

/// Hessian signature at a point of the EBS.
#[derive(Debug, Clone)]
pub struct CriticalPointRecord {
    pub point: Point,
    /// Dual weight used for the Hessian, scaled to unit mass.
    pub weights: DVector<f64>,
    /// `H(x, lambda)` in the orthonormal tangent frame.
    pub hessian: DMatrix<f64>,
    /// Tangent eigenvalues, ascending.
    pub spectrum: Vec<f64>,
    /// Positive eigenvalues on the full tangent space.
    pub index: usize,
    /// Positive eigenvalues of `H` restricted to the tangent space of the span.
    pub span_index: usize,
    /// Eigenvalue shared by every direction orthogonal to the span, when the
    /// span has positive codimension.
    pub normal_eigenvalue: Option<f64>,
    pub class: CriticalClass,
    /// Dimension of the dual weight space `Lambda(x)`.
    pub dual_dim: usize,
    pub smallest_singular_value: f64,
}

/// Classify an EBS point from the Hessian of the weighted variance for its
/// dual weights. With a multi-dimensional `Lambda(x)` each basis weight is
/// examined: the point is a local minimum (resp. degenerate) only if every
/// usable basis weight gives one.
pub fn classify_ebs_point(
    cfg: &ReferenceConfiguration,
    x: &Point,
    tol: RankTolerance,
    hessian_rel_tol: f64,
) -> Result<CriticalPointRecord> {
    let membership = ebs_membership(cfg, x, tol)?;
    if !membership.is_member {
        return Err(Error::NotOnEbs {
            smallest: membership.smallest_singular_value,
        });
    }
    let z = z_matrix(cfg, x)?;
    let span_frame = span_tangent_frame(&z, tol);
    let mut records: Vec<(DVector<f64>, DMatrix<f64>, Vec<f64>, CriticalClass, usize)> = Vec::new();
    for v in &membership.dual_basis {
        let weights = match WeightVector::new(v.iter().copied().collect()) {
            Ok(w) => w,
            Err(_) => continue,
        };
        let h = weighted_variance_hessian(cfg, x, &weights)?;
        let (spectrum, _) = symmetric_eigen(&h);
        let (class, index) = classify_spectrum(&spectrum, hessian_rel_tol);
        records.push((
            DVector::from_vec(weights.normalized()),
            h,
            spectrum,
            class,
            index,
        ));
    }
    let (weights, hessian, spectrum, first_class, index) =
        records.first().cloned().ok_or(Error::ZeroMass)?;
    let class = if records.iter().all(|r| r.3 == CriticalClass::LocalMin) {
        CriticalClass::LocalMin
    } else if records.iter().all(|r| r.3 == CriticalClass::Degenerate) {
        CriticalClass::Degenerate
    } else if records.len() == 1 {
        first_class
    } else {
        CriticalClass::Saddle
    };
    let span_index = if span_frame.ncols() == 0 {
        0
    } else {
        let restricted = span_frame.transpose() * &hessian * &span_frame;
        let (s, _) = symmetric_eigen(&restricted);
        classify_spectrum(&s, hessian_rel_tol).1
    };
    let n = cfg.manifold().dim();
    let normal_eigenvalue = if span_frame.ncols() < n {
        let mut c = 0.0;
        for (i, &l) in weights.iter().enumerate() {
            let theta = z.column(i).norm();
            c += l * match cfg.manifold() {
                Manifold::Sphere(_) => theta_cot(theta),
                Manifold::Hyperbolic(_) => theta_coth(theta),
                Manifold::Euclidean(_) => 1.0,
            };
        }
        Some(c)
    } else {
        None
    };
    Ok(CriticalPointRecord {
        point: x.clone(),
        weights,
        hessian,
        spectrum,
        index,
        span_index,
        normal_eigenvalue,
        class,
        dual_dim: membership.vanishing(),
        smallest_singular_value: membership.smallest_singular_value,
    })
}

/// Orthonormal frame (tangent coordinates) of the column space of `Z(x)`,
/// i.e. of the tangent space of the span at an EBS point.
fn span_tangent_frame(z: &DMatrix<f64>, tol: RankTolerance) -> DMatrix<f64> {
    if z.ncols() == 0 || z.nrows() == 0 {
        return DMatrix::zeros(z.nrows(), 0);
    }
    let svd = z.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let s_max = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    let thr = tol.threshold(s_max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] >= thr)
        .collect();
    let mut frame = DMatrix::zeros(z.nrows(), keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        frame.set_column(dst, &u.column(src));
    }
    frame
}

/// Numeric rank of `H(x, lambda)^{-1} Z(x)` at an EBS point: the local
/// dimension of the barycentric subspace there.
pub fn local_dimension(
    cfg: &ReferenceConfiguration,
    x: &Point,
    tol: RankTolerance,
) -> Result<usize> {
    let membership = ebs_membership(cfg, x, tol)?;
    if !membership.is_member {
        return Err(Error::NotOnEbs {
            smallest: membership.smallest_singular_value,
        });
    }
    let w = membership
        .dual_basis
        .iter()
        .find_map(|v| WeightVector::new(v.iter().copied().collect()).ok())
        .ok_or(Error::ZeroMass)?;
    let h = weighted_variance_hessian(cfg, x, &w)?;
    let h_inv = h.try_inverse().ok_or(Error::DegenerateHessian)?;
    let dx = h_inv * z_matrix(cfg, x)?;
    let s_max = right_svd(&dx).largest();
    Ok(numeric_rank(&dx, 1e-8, 1e-9 * s_max.max(1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_classes() {
        assert_eq!(
            classify_spectrum(&[0.5, 1.0], 1e-7),
            (CriticalClass::LocalMin, 2)
        );
        assert_eq!(
            classify_spectrum(&[-0.5, 1.0], 1e-7),
            (CriticalClass::Saddle, 1)
        );
        assert_eq!(
            classify_spectrum(&[1e-12, 1.0], 1e-7),
            (CriticalClass::Degenerate, 1)
        );
    }

    #[test]
    fn hessian_at_reference_point_is_identity() {
        let m = Manifold::Sphere(2);
        let cfg = ReferenceConfiguration::new(vec![
            m.point_from_slice(&[1.0, 0.0, 0.0]).unwrap(),
            m.point_from_slice(&[0.0, 1.0, 0.0]).unwrap(),
        ])
        .unwrap();
        let w = WeightVector::from_slice(&[1.0, 0.0]).unwrap();
        let h = weighted_variance_hessian(&cfg, &cfg.points()[0], &w).unwrap();
        assert!((h - DMatrix::identity(2, 2)).norm() < 1e-15);
        let rec = classify_ebs_point(
            &cfg,
            &cfg.points()[0],
            RankTolerance::default(),
            HESSIAN_REL_TOL,
        )
        .unwrap();
        assert_eq!(rec.class, CriticalClass::LocalMin);
        assert_eq!(rec.index, 2);
    }

    #[test]
    fn midpoint_variance() {
        let m = Manifold::Sphere(2);
        let cfg = ReferenceConfiguration::new(vec![
            m.point_from_slice(&[1.0, 0.0, 0.0]).unwrap(),
            m.point_from_slice(&[0.0, 1.0, 0.0]).unwrap(),
        ])
        .unwrap();
        let mid = m
            .project(DVector::from_column_slice(&[1.0, 1.0, 0.0]))
            .unwrap();
        let theta = core::f64::consts::FRAC_PI_2;
        let v =
            weighted_variance(&cfg, &mid, &WeightVector::from_slice(&[3.0, 3.0]).unwrap()).unwrap();
        assert!((v - theta * theta / 8.0).abs() < 1e-15);
        let v0 =
            weighted_variance(&cfg, &mid, &WeightVector::from_slice(&[0.0, 1.0]).unwrap()).unwrap();
        assert!((v0 - 0.5 * (theta / 2.0).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn off_ebs_point_is_rejected() {
        let m = Manifold::Sphere(3);
        let cfg = ReferenceConfiguration::new(vec![
            m.point_from_slice(&[1.0, 0.0, 0.0, 0.0]).unwrap(),
            m.point_from_slice(&[0.0, 1.0, 0.0, 0.0]).unwrap(),
        ])
        .unwrap();
        let x = m.point_from_slice(&[0.0, 0.0, 1.0, 0.0]).unwrap();
        assert!(matches!(
            classify_ebs_point(&cfg, &x, RankTolerance::default(), HESSIAN_REL_TOL),
            Err(Error::NotOnEbs { .. })
        ));
    }
}
