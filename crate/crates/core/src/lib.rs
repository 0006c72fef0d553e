//! Barycentric subspace analysis on constant-curvature Riemannian manifolds.
//!
//! The crate covers the unit sphere, the hyperboloid model of hyperbolic space
//! and flat Euclidean space, all represented in embedding coordinates:
//!
//! - [`manifold`]: points, tangent vectors, exp/log/distance, Hessian of the
//!   squared distance and its small-distance Taylor model.
//! - [`sphere`], [`hyperbolic`], [`euclidean`]: the closed forms behind each geometry.
//! - [`barycentric`]: exponential barycentric subspaces (EBS), dual weights,
//!   affine spans and projections, critical-point classification, weighted
//!   Fréchet means.
//! - [`flags`]: flags of affine spans, unexplained variance, AUV and the
//!   sample-limited searches (FBS, k-PBS, k-BSA), plus the Euclidean PCA flag.
//! - [`sampling`] and [`kendall`]: synthetic data and planar triangle shapes.
//!
//! Everything is `no_std` with `alloc`; file formats, the CLI and parallel sweeps
//! live in the companion `bsa` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod barycentric;
pub mod error;
pub mod euclidean;
pub mod flags;
pub mod hyperbolic;
pub mod kendall;
pub mod linalg;
pub mod manifold;
pub(crate) mod math;
pub mod sampling;
pub mod sphere;

pub use error::{Error, Result};
pub use manifold::{HessianOperator, Manifold, Point, TangentBasis, TangentVector};
