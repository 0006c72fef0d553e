//! Text dataset files and JSON result files.
//!
//! A dataset is a list of `#` header lines followed by one point per row,
//! comma-separated embedding coordinates printed with 17 significant digits:
//!
//! ```text
//! # manifold: sphere
//! # ambient_dim: 3
//! # scale: 2
//! # seed: 7
//! # free-form provenance
//! 1.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use bsa_core::flags::{AnalysisResult, PcaFlag, SearchDiagnostics};
use bsa_core::manifold::POINT_TOL;
use bsa_core::{Manifold, Point};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetFile {
    pub manifold: Manifold,
    /// Factor applied to the raw coordinates (2 for Kendall shapes of triangles).
    pub scale: Option<f64>,
    pub seed: Option<u64>,
    pub comments: Vec<String>,
    pub points: Vec<Point>,
}

pub fn manifold_kind(m: Manifold) -> &'static str {
    match m {
        Manifold::Sphere(_) => "sphere",
        Manifold::Hyperbolic(_) => "hyperbolic",
        Manifold::Euclidean(_) => "euclidean",
    }
}

/// Build a manifold from its kind and ambient dimension.
pub fn manifold_from_kind(kind: &str, ambient_dim: usize) -> Result<Manifold> {
    let m = match kind.trim().to_ascii_lowercase().as_str() {
        "sphere" => Manifold::sphere(ambient_dim.saturating_sub(1))?,
        "hyperbolic" => Manifold::hyperbolic(ambient_dim.saturating_sub(1))?,
        "euclidean" => Manifold::euclidean(ambient_dim)?,
        other => return Err(Error::Invalid(format!("unknown manifold kind `{other}`"))),
    };
    Ok(m)
}

impl DatasetFile {
    pub fn new(manifold: Manifold, points: Vec<Point>) -> Self {
        DatasetFile {
            manifold,
            scale: None,
            seed: None,
            comments: Vec::new(),
            points,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# manifold: {}", manifold_kind(self.manifold)).unwrap();
        writeln!(s, "# ambient_dim: {}", self.manifold.ambient_dim()).unwrap();
        if let Some(scale) = self.scale {
            writeln!(s, "# scale: {scale}").unwrap();
        }
        if let Some(seed) = self.seed {
            writeln!(s, "# seed: {seed}").unwrap();
        }
        for c in &self.comments {
            writeln!(s, "# {c}").unwrap();
        }
        for p in &self.points {
            let row: Vec<String> = p.coords().iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(s, "{}", row.join(",")).unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut kind = None;
        let mut ambient = None;
        let mut scale = None;
        let mut seed = None;
        let mut comments = Vec::new();
        let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(h) = line.strip_prefix('#') {
                let h = h.trim();
                match h.split_once(':').map(|(k, v)| (k.trim(), v.trim())) {
                    Some(("manifold", v)) => kind = Some(v.to_string()),
                    Some(("ambient_dim", v)) => {
                        ambient = Some(v.parse::<usize>().map_err(|_| Error::parse(line_no, "bad ambient_dim"))?)
                    }
                    Some(("scale", v)) => {
                        scale = Some(v.parse::<f64>().map_err(|_| Error::parse(line_no, "bad scale"))?)
                    }
                    Some(("seed", v)) => {
                        seed = Some(v.parse::<u64>().map_err(|_| Error::parse(line_no, "bad seed"))?)
                    }
                    _ => comments.push(h.to_string()),
                }
                continue;
            }
            let vals = line
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| Error::parse(line_no, format!("bad number: {e}")))?;
            rows.push((line_no, vals));
        }
        let kind = kind.ok_or_else(|| Error::parse(1, "missing `# manifold:` header"))?;
        let ambient = match ambient {
            Some(a) => a,
            None => rows
                .first()
                .map(|r| r.1.len())
                .ok_or_else(|| Error::parse(1, "missing `# ambient_dim:` header"))?,
        };
        let manifold = manifold_from_kind(&kind, ambient)?;
        let mut points = Vec::with_capacity(rows.len());
        for (row, (line_no, vals)) in rows.into_iter().enumerate() {
            if vals.len() != ambient {
                return Err(Error::parse(
                    line_no,
                    format!("row {} has {} coordinates, expected {ambient}", row + 1, vals.len()),
                ));
            }
            let v = DVector::from_vec(vals);
            let violation = manifold.constraint_violation(&v);
            let p = manifold.checked_point(v).map_err(|_| {
                Error::parse(
                    line_no,
                    format!("row {} violates the {} constraint by {violation:e} (> {POINT_TOL:e})", row + 1, manifold_kind(manifold)),
                )
            })?;
            points.push(p);
        }
        Ok(DatasetFile {
            manifold,
            scale,
            seed,
            comments,
            points,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_text())
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub candidates: u128,
    pub evaluated: u64,
    pub skipped_dependent: u64,
    pub skipped_focal: u64,
    pub pruned: u64,
    pub exhaustive: bool,
}

impl From<&SearchDiagnostics> for Diagnostics {
    fn from(d: &SearchDiagnostics) -> Self {
        Diagnostics {
            candidates: d.candidates,
            evaluated: d.evaluated,
            skipped_dependent: d.skipped_dependent,
            skipped_focal: d.skipped_focal,
            pruned: d.pruned,
            exhaustive: d.exhaustive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub point: f64,
    pub rank_rel: f64,
    pub rank_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub manifold: String,
    pub ambient_dim: usize,
    pub points: usize,
    pub scale: Option<f64>,
    pub seed: Option<u64>,
}

impl From<&DatasetFile> for DatasetInfo {
    fn from(d: &DatasetFile) -> Self {
        DatasetInfo {
            manifold: manifold_kind(d.manifold).to_string(),
            ambient_dim: d.manifold.ambient_dim(),
            points: d.points.len(),
            scale: d.scale,
            seed: d.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaSummary {
    pub direct_auv: f64,
    pub closed_form_auv: f64,
    pub eigenvalues: Vec<f64>,
    pub degenerate_spectrum: bool,
    pub mean: Vec<f64>,
}

impl From<&PcaFlag> for PcaSummary {
    fn from(p: &PcaFlag) -> Self {
        PcaSummary {
            direct_auv: p.direct_auv,
            closed_form_auv: p.closed_form_auv,
            eigenvalues: p.eigenvalues.clone(),
            degenerate_spectrum: p.degenerate_spectrum,
            mean: p.mean.iter().copied().collect(),
        }
    }
}

/// JSON document written by `analyze` and `pca-flag`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub method: String,
    pub k: usize,
    pub reference_indices: Vec<usize>,
    pub per_level_unexplained_variance: Vec<f64>,
    pub auv: f64,
    pub pure_subspace_auv: Option<f64>,
    pub seed: Option<u64>,
    pub budget: Option<u64>,
    pub parallel: bool,
    pub convention: String,
    pub diagnostics: Diagnostics,
    pub tolerances: Tolerances,
    pub dataset: DatasetInfo,
    pub pca: Option<PcaSummary>,
    pub timing_seconds: f64,
}

impl ResultFile {
    pub fn new(result: &AnalysisResult, dataset: &DatasetFile, parallel: bool, timing_seconds: f64) -> Self {
        let tol = bsa_core::barycentric::RankTolerance::default();
        ResultFile {
            method: result.method.as_str().to_string(),
            k: result.k,
            reference_indices: result.reference_indices.clone(),
            per_level_unexplained_variance: result.per_level_unexplained_variance.clone(),
            auv: result.auv,
            pure_subspace_auv: result.pure_subspace_auv,
            seed: result.seed,
            budget: result.budget,
            parallel,
            convention: result.convention.to_string(),
            diagnostics: (&result.diagnostics).into(),
            tolerances: Tolerances {
                point: POINT_TOL,
                rank_rel: tol.rel,
                rank_abs: tol.abs,
            },
            dataset: dataset.into(),
            pca: None,
            timing_seconds,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Copy with the timing zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        ResultFile {
            timing_seconds: 0.0,
            ..self.clone()
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_json()?)
    }
}

/// Per-level variance curve: `level,reference_points,unexplained_variance`.
pub fn curve_csv(result: &AnalysisResult) -> String {
    let mut s = String::from("level,reference_points,unexplained_variance\n");
    for (i, v) in result.per_level_unexplained_variance.iter().enumerate() {
        writeln!(s, "{i},{},{v:.16e}", i + 1).unwrap();
    }
    s
}
