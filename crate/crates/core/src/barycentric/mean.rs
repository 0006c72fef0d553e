use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::config::{ReferenceConfiguration, WeightVector};
use super::ebs::{first_moment, z_matrix};
use super::hessian::{weighted_variance, weighted_variance_hessian};
use crate::error::{Error, Result};
use crate::manifold::{Manifold, Point, TangentVector};
use crate::math;

/// Gradient-descent settings for [`weighted_frechet_mean`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrechetOptions {
    /// Initial step `tau`; halved until the variance stops increasing.
    pub step: f64,
    pub min_step: f64,
    pub max_iter: usize,
    /// Stop when `|M_1(x, lambda)|` (unit-mass weights) drops below this.
    pub tolerance: f64,
    /// Reject spherical configurations with a pair at distance `>= pi / 2`.
    pub check_ball: bool,
}

impl Default for FrechetOptions {
    fn default() -> Self {
        FrechetOptions {
            step: 1.0,
            min_step: 1e-6,
            max_iter: 1000,
            tolerance: 1e-10,
            check_ball: true,
        }
    }
}

/// Weighted Fréchet mean by Riemannian gradient descent
/// `x <- exp_x(tau M_1(x, lambda))` with non-negative weights.
pub fn weighted_frechet_mean(
    cfg: &ReferenceConfiguration,
    w: &WeightVector,
    init: Option<&Point>,
    opts: FrechetOptions,
) -> Result<Point> {
    if w.len() != cfg.len() {
        return Err(Error::InvalidArgument(
            "weight vector length differs from configuration size",
        ));
    }
    let lam = w.normalized();
    if lam.iter().any(|&l| l < 0.0) {
        return Err(Error::DomainViolation("weights must be non-negative"));
    }
    if opts.check_ball && matches!(cfg.manifold(), Manifold::Sphere(_)) {
        let pts = cfg.points();
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                if a.dist(b) >= core::f64::consts::FRAC_PI_2 {
                    return Err(Error::DomainViolation(
                        "reference points do not fit in a regular geodesic ball",
                    ));
                }
            }
        }
    }
    let mut x = match init {
        Some(p) => p.clone(),
        None => ambient_average(cfg, &lam)?,
    };
    let mut var = weighted_variance(cfg, &x, w)?;
    let mut grad = first_moment(cfg, &x, &lam)?;
    let mut gnorm = grad.norm();
    for _ in 0..opts.max_iter {
        if gnorm < opts.tolerance {
            return Ok(x);
        }
        let mut tau = opts.step;
        loop {
            let cand = x.exp(&grad.scale(tau));
            let accepted = match weighted_variance(cfg, &cand, w) {
                Ok(v) => {
                    let g = first_moment(cfg, &cand, &lam)?;
                    let gn = g.norm();
                    let slack = 4.0 * f64::EPSILON * var.max(1e-300);
                    if v < var || (v <= var + slack && gn < gnorm) {
                        Some((cand, v, g, gn))
                    } else {
                        None
                    }
                }
                Err(Error::CutLocus { .. }) => None,
                Err(e) => return Err(e),
            };
            if let Some((c, v, g, gn)) = accepted {
                x = c;
                var = v;
                grad = g;
                gnorm = gn;
                break;
            }
            tau *= 0.5;
            if tau < opts.min_step {
                return Err(Error::NonConvergence {
                    iterations: opts.max_iter,
                    residual: gnorm,
                });
            }
        }
    }
    if gnorm < opts.tolerance {
        Ok(x)
    } else {
        Err(Error::NonConvergence {
            iterations: opts.max_iter,
            residual: gnorm,
        })
    }
}

fn ambient_average(cfg: &ReferenceConfiguration, lam: &[f64]) -> Result<Point> {
    let mut acc = cfg.points()[0].coords() * 0.0;
    for (p, l) in cfg.points().iter().zip(lam) {
        acc += p.coords() * *l;
    }
    cfg.manifold().project(acc)
}

/// `D_lambda x_lambda = H(x, lambda)^{-1} Z(x) / (1^T lambda)` in the tangent
/// frame at the weighted mean `x`.
pub fn simplex_derivative(
    cfg: &ReferenceConfiguration,
    w: &WeightVector,
    x: &Point,
) -> Result<DMatrix<f64>> {
    let h = weighted_variance_hessian(cfg, x, w)?;
    let h_inv = h.try_inverse().ok_or(Error::DegenerateHessian)?;
    Ok(h_inv * z_matrix(cfg, x)? / w.mass())
}

/// Gradient of the p-variance and the equivalent EBS weights.
#[derive(Debug, Clone)]
pub struct PVarianceGradient {
    /// `-sum_i lambda_i dist^{p-2}(x, x_i) log_x(x_i)` with unit-mass `lambda`.
    pub gradient: TangentVector,
    /// `lambda'_i = lambda_i dist^{p-2}(x, x_i)`.
    pub weights: Vec<f64>,
}

fn power_factors(cfg: &ReferenceConfiguration, x: &Point, p: f64) -> Result<Vec<f64>> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument("p must be at least 1"));
    }
    cfg.points()
        .iter()
        .map(|xi| {
            let d = x.dist(xi);
            if p == 2.0 {
                Ok(1.0)
            } else if d == 0.0 || (p < 2.0 && d < 1e-14) {
                if p < 2.0 {
                    Err(Error::ReferenceCoincidence)
                } else {
                    Ok(0.0)
                }
            } else {
                Ok(math::exp((p - 2.0) * math::log(d)))
            }
        })
        .collect()
}

/// Gradient of `(1/p) sum_i lambda_i dist^p(x, x_i)`.
pub fn p_variance_gradient(
    cfg: &ReferenceConfiguration,
    x: &Point,
    w: &WeightVector,
    p: f64,
) -> Result<PVarianceGradient> {
    if w.len() != cfg.len() {
        return Err(Error::InvalidArgument(
            "weight vector length differs from configuration size",
        ));
    }
    let f = power_factors(cfg, x, p)?;
    let weights: Vec<f64> = w.as_slice().iter().zip(&f).map(|(l, f)| l * f).collect();
    let mass = w.mass();
    let scaled: Vec<f64> = weights.iter().map(|l| -l / mass).collect();
    let gradient = first_moment(cfg, x, &scaled)?;
    Ok(PVarianceGradient { gradient, weights })
}

/// Weights whose p-variance is critical at `x` when `lambda_ebs` cancels the
/// first moment there: `lambda_i = lambda_ebs_i / dist^{p-2}(x, x_i)`.
pub fn invert_power_reparametrization(
    cfg: &ReferenceConfiguration,
    x: &Point,
    lambda_ebs: &[f64],
    p: f64,
) -> Result<WeightVector> {
    if lambda_ebs.len() != cfg.len() {
        return Err(Error::InvalidArgument(
            "weight vector length differs from configuration size",
        ));
    }
    let f = power_factors(cfg, x, p)?;
    let mut out = Vec::with_capacity(f.len());
    for (l, f) in lambda_ebs.iter().zip(&f) {
        if *f == 0.0 {
            return Err(Error::ReferenceCoincidence);
        }
        out.push(l / f);
    }
    WeightVector::new(out)
}
