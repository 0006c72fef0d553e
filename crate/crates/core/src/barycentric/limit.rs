use alloc::vec::Vec;

use nalgebra::DVector;

use super::span::SpanBasis;
use crate::error::{Error, Result};
use crate::manifold::{Manifold, Point};

/// Residuals of restricted geodesic subspace samples against `Aff(X_eps)`.
#[derive(Debug, Clone)]
pub struct LimitReport {
    pub eps: Vec<f64>,
    /// Largest distance from a grid sample of `GS*(W)` to `Aff(X_eps)`, one per `eps`.
    pub max_residual: Vec<f64>,
    /// Residuals do not grow as `eps` decreases (up to `1e-12`).
    pub non_increasing: bool,
    pub samples: usize,
}

/// For each `eps`, build `X_eps = [x_0, exp(x_0, eps w_1), ...]` and measure
/// how far the points `exp(x_0, sum_j c_j w_j)` of a coefficient grid are
/// from its affine span. `per_axis` grid values per coefficient span
/// `[-radius, radius]`; samples beyond the first cut point are skipped.
pub fn rgs_limit_check(
    x0: &Point,
    directions: &[DVector<f64>],
    eps_list: &[f64],
    per_axis: usize,
    radius: f64,
) -> Result<LimitReport> {
    if directions.is_empty() || per_axis < 2 {
        return Err(Error::InvalidArgument(
            "need at least one direction and two grid values",
        ));
    }
    let tangents: Vec<DVector<f64>> = directions
        .iter()
        .map(|w| x0.project_tangent(w).into_vec())
        .collect();
    let k = tangents.len();
    let limit = match x0.manifold() {
        Manifold::Sphere(_) => core::f64::consts::PI - 1e-3,
        _ => f64::INFINITY,
    };
    let mut samples = Vec::new();
    let total = per_axis.pow(k as u32);
    for idx in 0..total {
        let mut rem = idx;
        let mut v = DVector::zeros(x0.coords().len());
        for t in &tangents {
            let c = -radius + 2.0 * radius * (rem % per_axis) as f64 / (per_axis - 1) as f64;
            rem /= per_axis;
            v += t * c;
        }
        let tv = x0.project_tangent(&v);
        if tv.norm() < limit {
            samples.push(x0.exp(&tv));
        }
    }
    let mut max_residual = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let mut basis = SpanBasis::empty(x0.manifold());
        basis.push(x0)?;
        for t in &tangents {
            let p = x0.exp(&x0.project_tangent(&(t * eps)));
            if !basis.push(&p)? {
                return Err(Error::DependentPoints);
            }
        }
        let mut worst: f64 = 0.0;
        for s in &samples {
            worst = worst.max(basis.residual(s)?);
        }
        max_residual.push(worst);
    }
    let non_increasing = max_residual.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    Ok(LimitReport {
        eps: eps_list.to_vec(),
        max_residual,
        non_increasing,
        samples: samples.len(),
    })
}
