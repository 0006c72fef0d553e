use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{self, numeric_rank};
use crate::manifold::{Manifold, Point};

/// Relative singular-value threshold for affine-independence checks.
const INDEPENDENCE_REL_TOL: f64 = 1e-10;

/// An ordered tuple of `k + 1` reference points on one manifold.
#[derive(Debug, Clone)]
pub struct ReferenceConfiguration {
    manifold: Manifold,
    points: Vec<Point>,
    independent: bool,
}

impl ReferenceConfiguration {
    /// Builds a configuration, rejecting cut-locus pairs and affinely
    /// dependent points.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let cfg = Self::new_unchecked(points)?;
        for (i, a) in cfg.points.iter().enumerate() {
            for b in &cfg.points[i + 1..] {
                let clearance = a.cut_locus_clearance(b);
                if clearance < crate::sphere::CUT_LOCUS_TOL {
                    return Err(Error::CutLocus { clearance });
                }
            }
        }
        if !cfg.independent {
            return Err(Error::DependentPoints);
        }
        Ok(cfg)
    }

    /// Builds a configuration without the independence requirement. Used for
    /// degenerate configurations such as a pair of antipodal points.
    pub fn new_unchecked(points: Vec<Point>) -> Result<Self> {
        let manifold = points
            .first()
            .ok_or(Error::InsufficientData("empty configuration"))?
            .manifold();
        if points.iter().any(|p| p.manifold() != manifold) {
            return Err(Error::ManifoldMismatch);
        }
        let mut cfg = ReferenceConfiguration {
            manifold,
            points,
            independent: false,
        };
        cfg.independent = cfg.rank_independent();
        Ok(cfg)
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Dimension `k` of the spanned subspace (number of points minus one).
    pub fn k(&self) -> usize {
        self.points.len() - 1
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_affinely_independent(&self) -> bool {
        self.independent
    }

    pub fn coords(&self) -> Vec<&DVector<f64>> {
        self.points.iter().map(|p| p.coords()).collect()
    }

    /// The `ambient x (k+1)` matrix `X` of reference coordinates.
    pub fn matrix(&self) -> DMatrix<f64> {
        linalg::columns(&self.coords())
    }

    /// Embedding rank test: `rank(X) = k + 1` on the sphere and hyperboloid,
    /// `rank([x_1 - x_0, ..., x_k - x_0]) = k` in Euclidean space.
    pub fn rank_independent(&self) -> bool {
        let k = self.k();
        match self.manifold {
            Manifold::Euclidean(_) => {
                if k == 0 {
                    return true;
                }
                let x0 = self.points[0].coords();
                let diffs: Vec<DVector<f64>> =
                    self.points[1..].iter().map(|p| p.coords() - x0).collect();
                let refs: Vec<&DVector<f64>> = diffs.iter().collect();
                numeric_rank(&linalg::columns(&refs), INDEPENDENCE_REL_TOL, 1e-14) == k
            }
            _ => numeric_rank(&self.matrix(), INDEPENDENCE_REL_TOL, 1e-14) == k + 1,
        }
    }

    /// Intrinsic test: no point on another's cut locus and, for every `i`,
    /// the vectors `log_{x_i}(x_j)`, `j != i`, are linearly independent.
    pub fn log_independent(&self) -> bool {
        let k = self.k();
        for (i, xi) in self.points.iter().enumerate() {
            let mut cols = Vec::with_capacity(k);
            for (j, xj) in self.points.iter().enumerate() {
                if i == j {
                    continue;
                }
                match xi.log(xj) {
                    Ok(v) => cols.push(v.into_vec()),
                    Err(_) => return false,
                }
            }
            if k == 0 {
                continue;
            }
            let refs: Vec<&DVector<f64>> = cols.iter().collect();
            if numeric_rank(&linalg::columns(&refs), INDEPENDENCE_REL_TOL, 1e-14) != k {
                return false;
            }
        }
        true
    }

    /// Sub-configuration made of the first `count` points.
    pub fn prefix(&self, count: usize) -> Result<Self> {
        if count == 0 || count > self.points.len() {
            return Err(Error::InvalidArgument("prefix length out of range"));
        }
        Self::new_unchecked(self.points[..count].to_vec())
    }
}

/// Homogeneous barycentric weights with non-zero total mass.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    lambda: Vec<f64>,
}

impl WeightVector {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        let norm = lambda.iter().map(|v| v * v).sum::<f64>();
        let mass: f64 = lambda.iter().sum();
        if lambda.is_empty() || !(mass.abs() > 1e-12 * crate::math::sqrt(norm)) {
            return Err(Error::ZeroMass);
        }
        Ok(WeightVector { lambda })
    }

    pub fn from_slice(lambda: &[f64]) -> Result<Self> {
        Self::new(lambda.to_vec())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.lambda
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    /// Total mass `1^T lambda`.
    pub fn mass(&self) -> f64 {
        self.lambda.iter().sum()
    }

    /// Weights rescaled to unit mass.
    pub fn normalized(&self) -> Vec<f64> {
        let m = self.mass();
        self.lambda.iter().map(|v| v / m).collect()
    }

    /// Projective equality: `self ~ c * other` within `tol` after normalisation.
    pub fn projectively_eq(&self, other: &WeightVector, tol: f64) -> bool {
        self.len() == other.len()
            && self
                .normalized()
                .iter()
                .zip(other.normalized())
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}
