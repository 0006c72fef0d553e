use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::config::{ReferenceConfiguration, WeightVector};
use crate::error::{Error, Result};
use crate::hyperbolic::{self, minkowski};
use crate::manifold::{Manifold, Point};
use crate::math::{self, sinc_inv, sinhc_inv};

/// A query whose projection onto the linear span is shorter than this is on
/// the focal set of a spherical affine span.
pub const FOCAL_TOL: f64 = 1e-10;

const DEPENDENCE_TOL: f64 = 1e-10;

/// Orthonormal description of an affine span, built incrementally.
///
/// - sphere: Euclidean orthonormal basis of `Span(X)`;
/// - hyperboloid: Minkowski-orthonormal basis whose first vector is `x_0`;
/// - Euclidean: origin `x_0` plus an orthonormal basis of the directions.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    manifold: Manifold,
    origin: Option<DVector<f64>>,
    vectors: Vec<DVector<f64>>,
}

impl SpanBasis {
    pub fn empty(manifold: Manifold) -> Self {
        SpanBasis {
            manifold,
            origin: None,
            vectors: Vec::new(),
        }
    }

    /// Span of all points of `cfg`; fails on dependent configurations.
    pub fn new(cfg: &ReferenceConfiguration) -> Result<Self> {
        let mut basis = Self::empty(cfg.manifold());
        for p in cfg.points() {
            if !basis.push(p)? {
                return Err(Error::DependentPoints);
            }
        }
        Ok(basis)
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    /// Number of reference points absorbed so far.
    pub fn len(&self) -> usize {
        match self.manifold {
            Manifold::Euclidean(_) => self.origin.as_ref().map_or(0, |_| self.vectors.len() + 1),
            _ => self.vectors.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Add a reference point. Returns `false` (leaving the span unchanged)
    /// when the point already lies in the span.
    pub fn push(&mut self, p: &Point) -> Result<bool> {
        if p.manifold() != self.manifold {
            return Err(Error::ManifoldMismatch);
        }
        let y = p.coords();
        match self.manifold {
            Manifold::Sphere(_) => {
                let w = self.orthogonalize(y.clone());
                let w = self.orthogonalize(w);
                let norm = w.norm();
                if norm <= DEPENDENCE_TOL * y.norm() {
                    return Ok(false);
                }
                self.vectors.push(w / norm);
            }
            Manifold::Hyperbolic(_) => {
                if self.vectors.is_empty() {
                    self.vectors.push(y.clone());
                    return Ok(true);
                }
                let w = self.orthogonalize(y.clone());
                let w = self.orthogonalize(w);
                let q = minkowski(&w, &w);
                if !(q > 0.0) || math::sqrt(q) <= DEPENDENCE_TOL * y.norm() {
                    return Ok(false);
                }
                self.vectors.push(w / math::sqrt(q));
            }
            Manifold::Euclidean(_) => {
                let Some(origin) = &self.origin else {
                    self.origin = Some(y.clone());
                    return Ok(true);
                };
                let d = y - origin;
                let scale = d.norm();
                let w = self.orthogonalize(d);
                let w = self.orthogonalize(w);
                let norm = w.norm();
                if norm <= DEPENDENCE_TOL * scale || norm <= 1e-14 {
                    return Ok(false);
                }
                self.vectors.push(w / norm);
            }
        }
        Ok(true)
    }

    /// Component of `v` orthogonal to the basis vectors (for the
    /// hyperboloid, Minkowski-orthogonal, with the time-like first vector).
    fn orthogonalize(&self, mut v: DVector<f64>) -> DVector<f64> {
        match self.manifold {
            Manifold::Hyperbolic(_) => {
                for (i, e) in self.vectors.iter().enumerate() {
                    let c = minkowski(&v, e);
                    if i == 0 {
                        v += e * c;
                    } else {
                        v -= e * c;
                    }
                }
            }
            _ => {
                for e in &self.vectors {
                    let c = v.dot(e);
                    v -= e * c;
                }
            }
        }
        v
    }

    /// Projection of `y` onto the linear (Euclidean: affine) span in ambient coordinates.
    pub fn linear_projection(&self, y: &DVector<f64>) -> DVector<f64> {
        match self.manifold {
            Manifold::Euclidean(_) => match &self.origin {
                Some(origin) => y - self.orthogonalize(y - origin),
                None => y.clone(),
            },
            _ => y - self.orthogonalize(y.clone()),
        }
    }

    /// Closest point of the affine span to `y` and the geodesic distance. The
    /// span of a single spherical point is that point alone (its antipode is not
    /// a limit of exponential barycenters).
    pub fn project(&self, y: &Point) -> Result<(Point, f64)> {
        if y.manifold() != self.manifold {
            return Err(Error::ManifoldMismatch);
        }
        if self.is_empty() {
            return Err(Error::InsufficientData("empty span"));
        }
        let yc = y.coords();
        match self.manifold {
            Manifold::Sphere(_) if self.vectors.len() == 1 => {
                let x0 = self.manifold.project(self.vectors[0].clone())?;
                let d = x0.dist(y);
                Ok((x0, d))
            }
            Manifold::Sphere(_) => {
                let p = self.linear_projection(yc);
                let pn = p.norm();
                if pn < FOCAL_TOL {
                    return Err(Error::FocalPoint { index: None });
                }
                let r = (yc - &p).norm();
                let closest = self.manifold.project(p)?;
                Ok((closest, math::atan2(r, pn)))
            }
            Manifold::Hyperbolic(_) => {
                let w = self.orthogonalize(yc.clone());
                let p = yc - &w;
                let r = math::sqrt(minkowski(&w, &w).max(0.0));
                let closest = self.manifold.project(hyperbolic::renormalize(&p))?;
                Ok((closest, math::asinh(r)))
            }
            Manifold::Euclidean(_) => {
                let p = self.linear_projection(yc);
                let r = (yc - &p).norm();
                Ok((self.manifold.project(p)?, r))
            }
        }
    }

    /// Geodesic distance from `y` to the affine span.
    pub fn residual(&self, y: &Point) -> Result<f64> {
        Ok(self.project(y)?.1)
    }
}

/// Closest point on an affine span, its distance and barycentric weights.
#[derive(Debug, Clone)]
pub struct SpanProjection {
    pub closest: Point,
    pub residual: f64,
    /// Unit-mass barycentric weights of `closest`; `None` when the
    /// recovered weights have zero mass (a point of the span outside the EBS).
    pub weights: Option<WeightVector>,
}

/// Project `y` onto `Aff(X)` and recover barycentric weights of the foot point.
pub fn affine_span_project(cfg: &ReferenceConfiguration, y: &Point) -> Result<SpanProjection> {
    let basis = SpanBasis::new(cfg)?;
    let (closest, residual) = basis.project(y)?;
    let x = cfg.matrix();
    let c = closest.coords();
    let weights = match cfg.manifold() {
        Manifold::Euclidean(_) => {
            let (rows, cols) = x.shape();
            let mut a = DMatrix::zeros(rows + 1, cols);
            a.view_mut((0, 0), (rows, cols)).copy_from(&x);
            a.row_mut(rows).fill(1.0);
            let mut b = DVector::zeros(rows + 1);
            b.rows_mut(0, rows).copy_from(c);
            b[rows] = 1.0;
            let sol = least_squares(&a, &b)?;
            WeightVector::new(sol.iter().copied().collect()).ok()
        }
        _ => {
            let renorm = least_squares(&x, c)?;
            barycentric_from_renormalized(cfg, &closest, renorm.as_slice()).ok()
        }
    };
    Ok(SpanProjection {
        closest,
        residual,
        weights: weights.map(|w| unit_mass(&w)),
    })
}

fn unit_mass(w: &WeightVector) -> WeightVector {
    WeightVector::new(w.normalized()).expect("normalised weights keep unit mass")
}

fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let svd = a.clone().svd(true, true);
    svd.solve(b, 1e-14)
        .map_err(|_| Error::Degenerate("least-squares solve failed"))
}

/// Diagonal `F(X, x)`: `theta_i / sin(theta_i)` on the sphere,
/// `theta_i / sinh(theta_i)` on the hyperboloid, `1` in flat space.
fn scale_factors(cfg: &ReferenceConfiguration, x: &Point) -> Result<Vec<f64>> {
    cfg.points()
        .iter()
        .map(|xi| {
            if x.manifold() != xi.manifold() {
                return Err(Error::ManifoldMismatch);
            }
            Ok(match cfg.manifold() {
                Manifold::Sphere(_) => {
                    let clearance = x.cut_locus_clearance(xi);
                    if clearance < crate::sphere::CUT_LOCUS_TOL {
                        return Err(Error::CutLocus { clearance });
                    }
                    sinc_inv(x.dist(xi))
                }
                Manifold::Hyperbolic(_) => sinhc_inv(x.dist(xi)),
                Manifold::Euclidean(_) => 1.0,
            })
        })
        .collect()
}

/// Renormalised weights `F(X, x) lambda`.
pub fn renormalized_weights(
    cfg: &ReferenceConfiguration,
    x: &Point,
    lambda: &[f64],
) -> Result<Vec<f64>> {
    if lambda.len() != cfg.len() {
        return Err(Error::InvalidArgument(
            "weight vector length differs from configuration size",
        ));
    }
    Ok(scale_factors(cfg, x)?
        .iter()
        .zip(lambda)
        .map(|(f, l)| f * l)
        .collect())
}

/// Inverse of [`renormalized_weights`]: `lambda = F(X, x)^{-1} lambda_tilde`.
pub fn barycentric_from_renormalized(
    cfg: &ReferenceConfiguration,
    x: &Point,
    renormalized: &[f64],
) -> Result<WeightVector> {
    if renormalized.len() != cfg.len() {
        return Err(Error::InvalidArgument(
            "weight vector length differs from configuration size",
        ));
    }
    let f = scale_factors(cfg, x)?;
    WeightVector::new(renormalized.iter().zip(&f).map(|(l, f)| l / f).collect())
}
