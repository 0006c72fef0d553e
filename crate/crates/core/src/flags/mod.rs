//! Flags of affine spans, unexplained variance and the AUV criterion, with
//! sample-limited searches over the data points.
//!
//! Variances follow the per-datum mean convention: `sigma^2_out(X)` is the
//! mean over the data of the squared distance to `Aff(X)`. The AUV of a flag
//! sums the unexplained variance of every prefix span, each weighted by the
//! number of reference points added at that step.

mod pca;
mod search;

use alloc::vec::Vec;

use crate::barycentric::{ReferenceConfiguration, SpanBasis};
use crate::error::{Error, Result};
use crate::manifold::Point;

pub use pca::{euclidean_pca_flag, pca_auv_closed_form, qr_affine_decompose, AffineQr, PcaFlag};
pub use search::{
    backward_order, better_candidate, bsa_flag_search, bsa_result, bsa_subtree,
    evaluate_ordered_tuple, evaluate_subset, forward_bsa, n_choose_k, n_permute_k,
    optimal_pure_subspace, pbs_from_subset, sample_tuples, subsets, TupleCandidate, DEFAULT_BUDGET,
};

/// Description of the variance convention, echoed into results.
pub const VARIANCE_CONVENTION: &str =
    "per-datum mean of squared residuals; each flag prefix weighted by the size of the group it adds";

/// Ordered groups of reference points; the `i`-th prefix span is spanned by
/// the points of the first `i` groups.
#[derive(Debug, Clone)]
pub struct Flag {
    pool: Vec<Point>,
    groups: Vec<Vec<usize>>,
}

impl Flag {
    pub fn new(pool: Vec<Point>, groups: Vec<Vec<usize>>) -> Result<Self> {
        if pool.is_empty() || groups.is_empty() {
            return Err(Error::InvalidFlag("empty pool or flag"));
        }
        let m = pool[0].manifold();
        if pool.iter().any(|p| p.manifold() != m) {
            return Err(Error::ManifoldMismatch);
        }
        let mut seen = alloc::vec![false; pool.len()];
        for g in &groups {
            if g.is_empty() {
                return Err(Error::InvalidFlag("empty group"));
            }
            for &i in g {
                if i >= pool.len() {
                    return Err(Error::InvalidFlag("index out of range"));
                }
                if seen[i] {
                    return Err(Error::InvalidFlag("groups overlap"));
                }
                seen[i] = true;
            }
        }
        Ok(Flag { pool, groups })
    }

    /// One point per group, in the given order.
    pub fn strict(pool: Vec<Point>, order: &[usize]) -> Result<Self> {
        Self::new(pool, order.iter().map(|&i| alloc::vec![i]).collect())
    }

    /// All points exchangeable: a single group.
    pub fn pure(pool: Vec<Point>, indices: &[usize]) -> Result<Self> {
        Self::new(pool, alloc::vec![indices.to_vec()])
    }

    pub fn pool(&self) -> &[Point] {
        &self.pool
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Number of prefix spans.
    pub fn levels(&self) -> usize {
        self.groups.len()
    }

    /// Points spanning prefix `level` (1-based count of groups).
    pub fn prefix_points(&self, level: usize) -> Vec<Point> {
        self.groups[..level]
            .iter()
            .flatten()
            .map(|&i| self.pool[i].clone())
            .collect()
    }

    /// Span bases of every prefix. Fails if the points are dependent.
    pub fn spans(&self) -> Result<Vec<SpanBasis>> {
        let mut basis = SpanBasis::empty(self.pool[0].manifold());
        let mut out = Vec::with_capacity(self.groups.len());
        for g in &self.groups {
            for &i in g {
                if !basis.push(&self.pool[i])? {
                    return Err(Error::DependentPoints);
                }
            }
            out.push(basis.clone());
        }
        Ok(out)
    }

    /// Largest distance from a reference point of one prefix to the next
    /// larger prefix span; zero for a valid flag.
    pub fn nesting_defect(&self) -> Result<f64> {
        let spans = self.spans()?;
        let mut worst: f64 = 0.0;
        for (level, span) in spans.iter().enumerate().skip(1) {
            for p in self.prefix_points(level) {
                worst = worst.max(span.residual(&p)?);
            }
        }
        Ok(worst)
    }
}

/// Mean squared distance from the data to a span; focal data are reported
/// with their index.
pub fn span_variance(span: &SpanBasis, data: &[Point]) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::InsufficientData("no data"));
    }
    let mut acc = 0.0;
    for (i, y) in data.iter().enumerate() {
        let r = span.residual(y).map_err(|e| match e {
            Error::FocalPoint { .. } => Error::FocalPoint { index: Some(i) },
            e => e,
        })?;
        acc += r * r;
    }
    Ok(acc / data.len() as f64)
}

/// Unexplained variance `sigma^2_out(X)`: mean squared distance from the data to `Aff(X)`.
pub fn unexplained_variance(cfg: &ReferenceConfiguration, data: &[Point]) -> Result<f64> {
    span_variance(&SpanBasis::new(cfg)?, data)
}

/// Unexplained variance of each prefix span of `flag`.
pub fn flag_variances(flag: &Flag, data: &[Point]) -> Result<Vec<f64>> {
    flag.spans()?
        .iter()
        .map(|s| span_variance(s, data))
        .collect()
}

/// Group-size-weighted sum of prefix variances.
pub fn weighted_auv(flag: &Flag, levels: &[f64]) -> f64 {
    flag.groups()
        .iter()
        .zip(levels)
        .map(|(g, v)| g.len() as f64 * v)
        .sum()
}

/// Accumulated unexplained variance of a flag.
pub fn auv(flag: &Flag, data: &[Point]) -> Result<f64> {
    Ok(weighted_auv(flag, &flag_variances(flag, data)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Fbs,
    Pbs,
    Bsa,
    EuclideanPca,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Fbs => "fbs",
            Method::Pbs => "pbs",
            Method::Bsa => "bsa",
            Method::EuclideanPca => "pca-flag",
        }
    }
}

/// Bookkeeping for tuple searches.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchDiagnostics {
    /// Size of the full search space.
    pub candidates: u128,
    /// Complete tuples whose criterion was evaluated.
    pub evaluated: u64,
    /// Subtrees or tuples skipped as affinely dependent.
    pub skipped_dependent: u64,
    /// Tuples skipped because some datum was on a focal set.
    pub skipped_focal: u64,
    /// Partial tuples cut by the branch-and-bound test.
    pub pruned: u64,
    pub exhaustive: bool,
}

impl SearchDiagnostics {
    pub fn merge(&mut self, other: &SearchDiagnostics) {
        self.evaluated += other.evaluated;
        self.skipped_dependent += other.skipped_dependent;
        self.skipped_focal += other.skipped_focal;
        self.pruned += other.pruned;
    }
}

/// Outcome of a flag analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisResult {
    pub method: Method,
    pub k: usize,
    /// Data indices of the reference points, in flag order (empty for the PCA flag).
    pub reference_indices: Vec<usize>,
    /// Unexplained variance of prefix spans of 1, 2, ..., k+1 points.
    pub per_level_unexplained_variance: Vec<f64>,
    pub auv: f64,
    /// `(k+1) sigma^2_out` of the full span (k-PBS only).
    pub pure_subspace_auv: Option<f64>,
    pub diagnostics: SearchDiagnostics,
    pub seed: Option<u64>,
    pub budget: Option<u64>,
    pub convention: &'static str,
}
