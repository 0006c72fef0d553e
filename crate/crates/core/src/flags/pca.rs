use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::{
    flag_variances, weighted_auv, AnalysisResult, Flag, Method, SearchDiagnostics,
    VARIANCE_CONVENTION,
};
use crate::barycentric::ReferenceConfiguration;
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::manifold::{Manifold, Point};

/// `X = x_0 1^T + Q T` with `q_0 = 0`, orthonormal `q_1..q_k` and `T` upper
/// triangular with zero first row and column.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineQr {
    pub origin: DVector<f64>,
    pub q: DMatrix<f64>,
    pub t: DMatrix<f64>,
}

/// Affine QR decomposition of Euclidean reference points.
pub fn qr_affine_decompose(cfg: &ReferenceConfiguration) -> Result<AffineQr> {
    let Manifold::Euclidean(n) = cfg.manifold() else {
        return Err(Error::InvalidArgument("affine QR needs Euclidean points"));
    };
    let pts = cfg.coords();
    let cols = pts.len();
    let origin = pts[0].clone();
    let mut q = DMatrix::zeros(n, cols);
    let mut t = DMatrix::zeros(cols, cols);
    for i in 1..cols {
        let d = pts[i] - &origin;
        let mut w = d.clone();
        for _ in 0..2 {
            for j in 1..i {
                let c = q.column(j).dot(&w);
                t[(j, i)] += c;
                w -= q.column(j) * c;
            }
        }
        let norm = w.norm();
        if norm <= 1e-10 * d.norm() || norm <= 1e-14 {
            return Err(Error::DependentPoints);
        }
        t[(i, i)] = norm;
        q.set_column(i, &(w / norm));
    }
    Ok(AffineQr { origin, q, t })
}

/// `sum_{i=1}^k i sigma_i^2 + (k+1) sum_{i>k} sigma_i^2` for eigenvalues in
/// descending order.
pub fn pca_auv_closed_form(eigenvalues: &[f64], k: usize) -> f64 {
    eigenvalues
        .iter()
        .enumerate()
        .map(|(i, s)| (i + 1).min(k + 1) as f64 * s)
        .sum()
}

/// The PCA flag of Euclidean data with both AUV evaluations.
#[derive(Debug, Clone)]
pub struct PcaFlag {
    pub result: AnalysisResult,
    pub flag: Flag,
    pub mean: DVector<f64>,
    /// Covariance eigenvalues, descending (per-datum normalisation).
    pub eigenvalues: Vec<f64>,
    /// Matching unit eigenvectors as columns.
    pub eigenvectors: DMatrix<f64>,
    pub direct_auv: f64,
    pub closed_form_auv: f64,
    /// Some of the leading `k + 1` eigenvalues are (numerically) repeated,
    /// so the flag is not unique.
    pub degenerate_spectrum: bool,
}

/// Flag `x_0 = mean`, `x_i = x_0 + u_i` built from the top-k eigenvectors.
pub fn euclidean_pca_flag(data: &[Point], k: usize) -> Result<PcaFlag> {
    let first = data
        .first()
        .ok_or(Error::InsufficientData("empty dataset"))?;
    let Manifold::Euclidean(n) = first.manifold() else {
        return Err(Error::InvalidArgument("PCA flag needs Euclidean data"));
    };
    if data.iter().any(|p| p.manifold() != first.manifold()) {
        return Err(Error::ManifoldMismatch);
    }
    if k > n {
        return Err(Error::InvalidArgument("k exceeds the dimension"));
    }
    let count = data.len() as f64;
    let mut mean = DVector::zeros(n);
    for p in data {
        mean += p.coords();
    }
    mean /= count;
    let mut cov = DMatrix::zeros(n, n);
    for p in data {
        let d = p.coords() - &mean;
        cov += &d * d.transpose();
    }
    cov /= count;
    let (mut values, vectors) = symmetric_eigen(&cov);
    values.reverse();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for j in 0..n {
        eigenvectors.set_column(j, &vectors.column(n - 1 - j));
    }
    let scale = values
        .first()
        .copied()
        .unwrap_or(0.0)
        .abs()
        .max(f64::MIN_POSITIVE);
    let degenerate_spectrum = (0..k.min(n - 1) + 1)
        .filter(|&i| i + 1 < n)
        .any(|i| (values[i] - values[i + 1]).abs() <= 1e-10 * scale);
    let mut pool = Vec::with_capacity(k + 1);
    pool.push(first.manifold().point(mean.clone())?);
    for j in 0..k {
        pool.push(first.manifold().point(&mean + eigenvectors.column(j))?);
    }
    let order: Vec<usize> = (0..=k).collect();
    let flag = Flag::strict(pool, &order)?;
    let levels = flag_variances(&flag, data)?;
    let direct_auv = weighted_auv(&flag, &levels);
    let closed_form_auv = pca_auv_closed_form(&values, k);
    let result = AnalysisResult {
        method: Method::EuclideanPca,
        k,
        reference_indices: Vec::new(),
        per_level_unexplained_variance: levels,
        auv: direct_auv,
        pure_subspace_auv: None,
        diagnostics: SearchDiagnostics {
            exhaustive: true,
            ..Default::default()
        },
        seed: None,
        budget: None,
        convention: VARIANCE_CONVENTION,
    };
    Ok(PcaFlag {
        result,
        flag,
        mean,
        eigenvalues: values,
        eigenvectors,
        direct_auv,
        closed_form_auv,
        degenerate_spectrum,
    })
}
