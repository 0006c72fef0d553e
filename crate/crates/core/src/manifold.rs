//! Points, tangent vectors and the shared geometric operations, dispatched
//! over the three constant-curvature model spaces.

use alloc::vec::Vec;
use core::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::{euclidean, hyperbolic, sphere};

/// Constraint violation tolerated when loading or constructing points.
pub const POINT_TOL: f64 = 1e-9;

/// A constant-curvature model space of intrinsic dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Manifold {
    /// Unit sphere `S^n` in `R^{n+1}`.
    Sphere(usize),
    /// Hyperboloid `H^n` in `R^{1,n}`.
    Hyperbolic(usize),
    /// Flat `R^n`.
    Euclidean(usize),
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Manifold::Sphere(n) => write!(f, "sphere({n})"),
            Manifold::Hyperbolic(n) => write!(f, "hyperbolic({n})"),
            Manifold::Euclidean(n) => write!(f, "euclidean({n})"),
        }
    }
}

impl Manifold {
    pub fn sphere(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument("sphere dimension must be >= 1"));
        }
        Ok(Manifold::Sphere(n))
    }

    pub fn hyperbolic(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("hyperbolic dimension must be >= 2"));
        }
        Ok(Manifold::Hyperbolic(n))
    }

    pub fn euclidean(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument("euclidean dimension must be >= 1"));
        }
        Ok(Manifold::Euclidean(n))
    }

    /// Intrinsic dimension.
    pub fn dim(&self) -> usize {
        match *self {
            Manifold::Sphere(n) | Manifold::Hyperbolic(n) | Manifold::Euclidean(n) => n,
        }
    }

    /// Length of the coordinate vectors.
    pub fn ambient_dim(&self) -> usize {
        match *self {
            Manifold::Sphere(n) | Manifold::Hyperbolic(n) => n + 1,
            Manifold::Euclidean(n) => n,
        }
    }

    /// Sectional curvature.
    pub fn curvature(&self) -> f64 {
        match self {
            Manifold::Sphere(_) => 1.0,
            Manifold::Hyperbolic(_) => -1.0,
            Manifold::Euclidean(_) => 0.0,
        }
    }

    /// How far `coords` is from satisfying the manifold constraint.
    pub fn constraint_violation(&self, coords: &DVector<f64>) -> f64 {
        match self {
            Manifold::Sphere(_) => (coords.norm() - 1.0).abs(),
            Manifold::Hyperbolic(_) => {
                let q = (hyperbolic::minkowski(coords, coords) + 1.0).abs();
                if coords[0] > 0.0 {
                    q
                } else {
                    f64::INFINITY
                }
            }
            Manifold::Euclidean(_) => 0.0,
        }
    }

    /// Validate `coords` within [`POINT_TOL`] and snap it exactly onto the manifold.
    pub fn point(&self, coords: DVector<f64>) -> Result<Point> {
        if coords.len() != self.ambient_dim() {
            return Err(Error::ManifoldMismatch);
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate"));
        }
        if self.constraint_violation(&coords) > POINT_TOL {
            return Err(Error::InvalidPoint(
                "coordinates violate the manifold constraint",
            ));
        }
        self.project(coords)
    }

    /// Validate `coords` within [`POINT_TOL`] and keep them bit-for-bit.
    pub fn checked_point(&self, coords: DVector<f64>) -> Result<Point> {
        if coords.len() != self.ambient_dim() {
            return Err(Error::ManifoldMismatch);
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate"));
        }
        if self.constraint_violation(&coords) > POINT_TOL {
            return Err(Error::InvalidPoint(
                "coordinates violate the manifold constraint",
            ));
        }
        Ok(Point {
            manifold: *self,
            coords,
        })
    }

    /// Radially project an arbitrary vector onto the manifold.
    pub fn project(&self, coords: DVector<f64>) -> Result<Point> {
        if coords.len() != self.ambient_dim() {
            return Err(Error::ManifoldMismatch);
        }
        let coords = match self {
            Manifold::Sphere(_) => {
                let norm = coords.norm();
                if !(norm > 0.0) {
                    return Err(Error::InvalidPoint(
                        "cannot project the origin onto the sphere",
                    ));
                }
                coords / norm
            }
            Manifold::Hyperbolic(_) => {
                if hyperbolic::minkowski(&coords, &coords) >= 0.0 {
                    return Err(Error::InvalidPoint("vector is not time-like"));
                }
                hyperbolic::check_upper_sheet(&coords)?;
                hyperbolic::renormalize(&coords)
            }
            Manifold::Euclidean(_) => coords,
        };
        Ok(Point {
            manifold: *self,
            coords,
        })
    }

    pub fn point_from_slice(&self, coords: &[f64]) -> Result<Point> {
        self.point(DVector::from_column_slice(coords))
    }

    /// The canonical base point: `e_0` on the sphere and hyperboloid, the origin in `R^n`.
    pub fn origin(&self) -> Point {
        let mut coords = DVector::zeros(self.ambient_dim());
        if !matches!(self, Manifold::Euclidean(_)) {
            coords[0] = 1.0;
        }
        Point {
            manifold: *self,
            coords,
        }
    }

    /// Inner product used for tangent vectors.
    pub fn inner(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        match self {
            Manifold::Hyperbolic(_) => hyperbolic::minkowski(u, v),
            _ => u.dot(v),
        }
    }
}

/// A point in embedding coordinates, tagged with its manifold.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    manifold: Manifold,
    coords: DVector<f64>,
}

/// A tangent vector at `base`, in embedding coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    base: Point,
    vec: DVector<f64>,
}

impl Point {
    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn into_coords(self) -> DVector<f64> {
        self.coords
    }

    fn same_manifold(&self, other: &Point) {
        assert_eq!(
            self.manifold, other.manifold,
            "points live on different manifolds"
        );
    }

    /// Wrap `vec` as a tangent vector at this point; it must already be tangent.
    pub fn tangent(&self, vec: DVector<f64>) -> Result<TangentVector> {
        if vec.len() != self.coords.len() {
            return Err(Error::ManifoldMismatch);
        }
        let normal = match self.manifold {
            Manifold::Sphere(_) => vec.dot(&self.coords),
            Manifold::Hyperbolic(_) => hyperbolic::minkowski(&vec, &self.coords),
            Manifold::Euclidean(_) => 0.0,
        };
        if normal.abs() > POINT_TOL * (1.0 + vec.norm()) {
            return Err(Error::InvalidTangent("vector has a normal component"));
        }
        Ok(self.project_tangent(&vec))
    }

    /// Orthogonal projection of an ambient vector onto the tangent space.
    pub fn project_tangent(&self, w: &DVector<f64>) -> TangentVector {
        let vec = match self.manifold {
            Manifold::Sphere(_) => sphere::tangent_projection(&self.coords, w),
            Manifold::Hyperbolic(_) => hyperbolic::tangent_projection(&self.coords, w),
            Manifold::Euclidean(_) => w.clone(),
        };
        TangentVector {
            base: self.clone(),
            vec,
        }
    }

    pub fn zero_tangent(&self) -> TangentVector {
        TangentVector {
            base: self.clone(),
            vec: DVector::zeros(self.coords.len()),
        }
    }

    /// Exponential map. Panics if `v` is not attached to this point.
    pub fn exp(&self, v: &TangentVector) -> Point {
        assert_eq!(
            self.manifold, v.base.manifold,
            "tangent vector from another manifold"
        );
        assert!(
            (&self.coords - &v.base.coords).amax() <= 1e-12,
            "tangent vector is attached to a different base point"
        );
        let coords = match self.manifold {
            Manifold::Sphere(_) => sphere::exp(&self.coords, &v.vec),
            Manifold::Hyperbolic(_) => hyperbolic::exp(&self.coords, &v.vec),
            Manifold::Euclidean(_) => euclidean::exp(&self.coords, &v.vec),
        };
        Point {
            manifold: self.manifold,
            coords,
        }
    }

    /// Exponential of an ambient vector after projecting it onto the tangent space.
    pub fn exp_ambient(&self, w: &DVector<f64>) -> Point {
        self.exp(&self.project_tangent(w))
    }

    /// Riemannian log; fails within [`sphere::CUT_LOCUS_TOL`] of the cut locus.
    pub fn log(&self, y: &Point) -> Result<TangentVector> {
        self.same_manifold(y);
        let vec = match self.manifold {
            Manifold::Sphere(_) => sphere::log(&self.coords, &y.coords)?,
            Manifold::Hyperbolic(_) => hyperbolic::log(&self.coords, &y.coords),
            Manifold::Euclidean(_) => euclidean::log(&self.coords, &y.coords),
        };
        Ok(TangentVector {
            base: self.clone(),
            vec,
        })
    }

    pub fn dist(&self, y: &Point) -> f64 {
        self.same_manifold(y);
        match self.manifold {
            Manifold::Sphere(_) => sphere::angle(&self.coords, &y.coords),
            Manifold::Hyperbolic(_) => hyperbolic::angle(&self.coords, &y.coords),
            Manifold::Euclidean(_) => euclidean::dist(&self.coords, &y.coords),
        }
    }

    /// `pi - dist` on the sphere, `+inf` elsewhere.
    pub fn cut_locus_clearance(&self, y: &Point) -> f64 {
        match self.manifold {
            Manifold::Sphere(_) => core::f64::consts::PI - self.dist(y),
            _ => {
                self.same_manifold(y);
                f64::INFINITY
            }
        }
    }

    /// Riemannian gradient of `dist^2(., y)`, i.e. `-2 log_x(y)`.
    pub fn grad_dist_sq(&self, y: &Point) -> Result<TangentVector> {
        let mut l = self.log(y)?;
        l.vec *= -2.0;
        Ok(l)
    }

    /// Half the Hessian of `dist^2(., y)`, equivalently `-D_x log_x(y)`.
    ///
    /// On the tangent space its spectrum is `1` along `log_x(y)` and
    /// `theta cot(theta)` (sphere) or `theta coth(theta)` (hyperbolic) on the
    /// orthogonal complement. At `x = y` it is the identity on the tangent space.
    pub fn hessian_dist_sq(&self, y: &Point) -> Result<HessianOperator> {
        self.same_manifold(y);
        let matrix = match self.manifold {
            Manifold::Sphere(_) => sphere::half_hessian_dist_sq(&self.coords, &y.coords)?,
            Manifold::Hyperbolic(_) => hyperbolic::half_hessian_dist_sq(&self.coords, &y.coords),
            Manifold::Euclidean(_) => euclidean::half_hessian_dist_sq(&self.coords),
        };
        Ok(HessianOperator {
            base: self.clone(),
            matrix,
        })
    }

    /// Second-order model `-Id + (1/3) R(., l, ., l)` of `D_x log_x(y)` in
    /// the orthonormal tangent frame of [`Point::tangent_basis`], with
    /// `l = log_x(y)`. For constant curvature `kappa` this is
    /// `-Id + (kappa / 3) (|l|^2 Id - l l^T)`.
    pub fn taylor_dlog(&self, y: &Point) -> Result<DMatrix<f64>> {
        let n = self.manifold.dim();
        let basis = self.tangent_basis();
        let l = basis.coords(&self.log(y)?);
        let kappa = self.manifold.curvature();
        let curvature =
            (DMatrix::identity(n, n) * l.norm_squared() - &l * l.transpose()) * (kappa / 3.0);
        Ok(curvature - DMatrix::identity(n, n))
    }

    /// Exact `D_x log_x(y)` in the tangent frame (minus the half Hessian).
    pub fn dlog(&self, y: &Point) -> Result<DMatrix<f64>> {
        Ok(-self.hessian_dist_sq(y)?.tangent_matrix())
    }

    /// Orthonormal frame of the tangent space.
    pub fn tangent_basis(&self) -> TangentBasis {
        let frame = match self.manifold {
            Manifold::Sphere(_) => sphere::tangent_basis(&self.coords),
            Manifold::Hyperbolic(_) => hyperbolic::tangent_basis(&self.coords),
            Manifold::Euclidean(n) => DMatrix::identity(n, n),
        };
        TangentBasis {
            manifold: self.manifold,
            frame,
        }
    }

    /// First-order retraction: radial projection of `x + v` onto the manifold.
    pub fn retract(&self, v: &DVector<f64>) -> Point {
        let coords = match self.manifold {
            Manifold::Sphere(_) => sphere::retract(&self.coords, v),
            Manifold::Hyperbolic(_) => hyperbolic::retract(&self.coords, v),
            Manifold::Euclidean(_) => &self.coords + v,
        };
        Point {
            manifold: self.manifold,
            coords,
        }
    }
}

impl TangentVector {
    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn vec(&self) -> &DVector<f64> {
        &self.vec
    }

    pub fn into_vec(self) -> DVector<f64> {
        self.vec
    }

    /// Riemannian norm.
    pub fn norm(&self) -> f64 {
        match self.base.manifold {
            Manifold::Hyperbolic(_) => hyperbolic::tangent_norm(&self.vec),
            _ => self.vec.norm(),
        }
    }

    pub fn scale(&self, s: f64) -> TangentVector {
        TangentVector {
            base: self.base.clone(),
            vec: &self.vec * s,
        }
    }
}

/// An orthonormal frame `(b_1, ..., b_n)` of a tangent space, stored as the
/// columns of an ambient matrix.
#[derive(Debug, Clone)]
pub struct TangentBasis {
    manifold: Manifold,
    frame: DMatrix<f64>,
}

impl TangentBasis {
    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    /// Components of a tangent vector in this frame.
    pub fn coords(&self, v: &TangentVector) -> DVector<f64> {
        self.coords_of(&v.vec)
    }

    pub fn coords_of(&self, v: &DVector<f64>) -> DVector<f64> {
        match self.manifold {
            Manifold::Hyperbolic(_) => self.frame.transpose() * hyperbolic::lower(v),
            _ => self.frame.transpose() * v,
        }
    }

    /// Ambient vector with the given components.
    pub fn vector(&self, c: &DVector<f64>) -> DVector<f64> {
        &self.frame * c
    }

    /// Express an ambient operator acting on the tangent space as an `n x n` matrix.
    pub fn operator(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        match self.manifold {
            Manifold::Hyperbolic(n) => {
                self.frame.transpose() * hyperbolic::metric(n + 1) * m * &self.frame
            }
            _ => self.frame.transpose() * m * &self.frame,
        }
    }
}

/// Half the Hessian of a squared distance at `base`, as an ambient operator
/// whose kernel contains the base point.
#[derive(Debug, Clone)]
pub struct HessianOperator {
    base: Point,
    matrix: DMatrix<f64>,
}

impl HessianOperator {
    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Bilinear form obtained by lowering the index (`J M` on the hyperboloid).
    pub fn lowered(&self) -> DMatrix<f64> {
        match self.base.manifold {
            Manifold::Hyperbolic(n) => hyperbolic::metric(n + 1) * &self.matrix,
            _ => self.matrix.clone(),
        }
    }

    /// Symmetric `n x n` matrix in the orthonormal tangent frame.
    pub fn tangent_matrix(&self) -> DMatrix<f64> {
        self.base.tangent_basis().operator(&self.matrix)
    }

    /// Eigenvalues on the tangent space, ascending.
    pub fn tangent_spectrum(&self) -> Vec<f64> {
        crate::linalg::symmetric_eigen(&self.tangent_matrix()).0
    }
}
