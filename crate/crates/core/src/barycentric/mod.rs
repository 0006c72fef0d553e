//! Exponential barycentric subspaces and affine spans.
//!
//! A point `x` is an exponential barycenter of the reference points
//! `x_0..x_k` with weights `lambda` when `sum_i lambda_i log_x(x_i) = 0`.
//! The locus of such points over all weights is the EBS; its closure is the
//! affine span. On the sphere and the hyperboloid the affine span is the
//! intersection of the manifold with the linear span of the reference
//! vectors, which gives closed-form projections.

mod config;
mod ebs;
mod hessian;
mod limit;
mod mean;
mod span;

pub use config::{ReferenceConfiguration, WeightVector};
pub use ebs::{
    covariance_eigenvalues, ebs_membership, first_moment, omega_matrix, z_matrix, EbsMembership,
    RankTolerance,
};
pub use hessian::{
    classify_ebs_point, classify_spectrum, local_dimension, weighted_variance,
    weighted_variance_hessian, CriticalClass, CriticalPointRecord, HESSIAN_REL_TOL,
};
pub use limit::{rgs_limit_check, LimitReport};
pub use mean::{
    invert_power_reparametrization, p_variance_gradient, simplex_derivative, weighted_frechet_mean,
    FrechetOptions, PVarianceGradient,
};
pub use span::{
    affine_span_project, barycentric_from_renormalized, renormalized_weights, SpanBasis,
    SpanProjection, FOCAL_TOL,
};
