//! Signature maps: classify every grid point of a 2-dimensional sphere or
//! hyperbolic plane as a critical point of the weighted variance of three
//! reference points, for plotting and connectivity analysis.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt::Write as _;

use bsa_core::barycentric::{
    classify_ebs_point, ebs_membership, CriticalClass, RankTolerance, ReferenceConfiguration,
    HESSIAN_REL_TOL,
};
use bsa_core::{hyperbolic, Error as CoreError, Manifold, Point};
use nalgebra::DVector;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Step of the perturbation test applied to local minima.
pub const PERTURBATION_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grid {
    /// Cell centres at colatitude `(i + 1/2) pi / rows`, longitude `2 pi j / cols`.
    Sphere { rows: usize, cols: usize },
    /// Weierstrass coordinates on `[-half_width, half_width]^2`, endpoints included.
    Weierstrass { half_width: f64, rows: usize, cols: usize },
}

impl Grid {
    pub fn sphere_default() -> Self {
        Grid::Sphere { rows: 100, cols: 200 }
    }

    pub fn hyperbolic_default() -> Self {
        Grid::Weierstrass { half_width: 10.0, rows: 100, cols: 200 }
    }

    pub fn shape(&self) -> (usize, usize) {
        match *self {
            Grid::Sphere { rows, cols } | Grid::Weierstrass { rows, cols, .. } => (rows, cols),
        }
    }

    /// Grid parameters and point of cell `(i, j)`.
    pub fn cell(&self, i: usize, j: usize) -> (f64, f64, Point) {
        match *self {
            Grid::Sphere { rows, cols } => {
                let theta = (i as f64 + 0.5) * PI / rows as f64;
                let phi = 2.0 * PI * j as f64 / cols as f64;
                let c = DVector::from_column_slice(&[
                    theta.sin() * phi.cos(),
                    theta.sin() * phi.sin(),
                    theta.cos(),
                ]);
                (theta, phi, Manifold::Sphere(2).project(c).expect("unit vector"))
            }
            Grid::Weierstrass { half_width, rows, cols } => {
                let t = |k: usize, n: usize| -half_width + 2.0 * half_width * k as f64 / (n - 1).max(1) as f64;
                let (u, v) = (t(j, cols), t(i, rows));
                let p = hyperbolic::from_weierstrass(&[u, v]);
                (u, v, Manifold::Hyperbolic(2).project(p).expect("time-like vector"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignatureCell {
    pub row: usize,
    pub col: usize,
    pub u: f64,
    pub v: f64,
    pub coords: Vec<f64>,
    pub smallest_singular_value: f64,
    pub member: bool,
    pub index: Option<usize>,
    pub class: Option<CriticalClass>,
    /// Perturbation test result for local minima.
    pub verified: Option<bool>,
}

impl SignatureCell {
    pub fn label(&self) -> &'static str {
        match self.class {
            Some(c) => c.as_str(),
            None if self.member => "singular",
            None => "outside",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SignatureMap {
    pub manifold: Manifold,
    pub grid: Grid,
    pub cells: Vec<SignatureCell>,
}

/// Variance `sum lambda_i d^2(x, x_i)` increases along 8 tangent directions.
pub fn perturbation_check(cfg: &ReferenceConfiguration, x: &Point, weights: &[f64], step: f64) -> bool {
    let f = |p: &Point| -> f64 {
        cfg.points()
            .iter()
            .zip(weights)
            .map(|(q, l)| l * p.dist(q).powi(2))
            .sum()
    };
    let f0 = f(x);
    let basis = x.tangent_basis();
    (0..8).all(|k| {
        let a = k as f64 * PI / 4.0;
        let c = DVector::from_column_slice(&[a.cos() * step, a.sin() * step]);
        let y = x.exp(&x.project_tangent(&basis.vector(&c)));
        f(&y) > f0
    })
}

fn classify_cell(cfg: &ReferenceConfiguration, grid: Grid, i: usize, j: usize, tol: RankTolerance) -> Result<SignatureCell> {
    let (u, v, x) = grid.cell(i, j);
    let mut cell = SignatureCell {
        row: i,
        col: j,
        u,
        v,
        coords: x.coords().iter().copied().collect(),
        smallest_singular_value: f64::NAN,
        member: false,
        index: None,
        class: None,
        verified: None,
    };
    let mem = match ebs_membership(cfg, &x, tol) {
        Ok(m) => m,
        Err(CoreError::CutLocus { .. }) => return Ok(cell),
        Err(e) => return Err(e.into()),
    };
    cell.smallest_singular_value = mem.smallest_singular_value;
    cell.member = mem.is_member;
    if !mem.is_member {
        return Ok(cell);
    }
    match classify_ebs_point(cfg, &x, tol, HESSIAN_REL_TOL) {
        Ok(rec) => {
            if rec.class == CriticalClass::LocalMin {
                let w: Vec<f64> = rec.weights.iter().copied().collect();
                cell.verified = Some(perturbation_check(cfg, &x, &w, PERTURBATION_STEP));
            }
            cell.index = Some(rec.index);
            cell.class = Some(rec.class);
        }
        Err(CoreError::ZeroMass) | Err(CoreError::DegenerateHessian) => {}
        Err(e) => return Err(e.into()),
    }
    Ok(cell)
}

/// Sweep `grid` for the reference points of `cfg`.
pub fn signature_map(cfg: &ReferenceConfiguration, grid: Grid, tol: RankTolerance, parallel: bool) -> Result<SignatureMap> {
    let m = cfg.manifold();
    match (m, grid) {
        (Manifold::Sphere(2), Grid::Sphere { .. }) | (Manifold::Hyperbolic(2), Grid::Weierstrass { .. }) => {}
        _ => return Err(Error::Invalid(format!("grid does not match {m}"))),
    }
    if cfg.k() != 2 || !cfg.is_affinely_independent() {
        return Err(Error::Invalid("signature maps need three affinely independent points".into()));
    }
    let (rows, cols) = grid.shape();
    let row = |i: usize| -> Result<Vec<SignatureCell>> { (0..cols).map(|j| classify_cell(cfg, grid, i, j, tol)).collect() };
    let by_row: Vec<Result<Vec<SignatureCell>>> = if parallel {
        (0..rows).into_par_iter().map(row).collect()
    } else {
        (0..rows).map(row).collect()
    };
    let mut cells = Vec::with_capacity(rows * cols);
    for r in by_row {
        cells.extend(r?);
    }
    Ok(SignatureMap { manifold: m, grid, cells })
}

impl SignatureMap {
    pub fn cell(&self, i: usize, j: usize) -> &SignatureCell {
        &self.cells[i * self.grid.shape().1 + j]
    }

    /// Indices found at classified EBS cells.
    pub fn indices(&self) -> BTreeSet<usize> {
        self.cells.iter().filter_map(|c| c.index).collect()
    }

    pub fn count(&self, class: CriticalClass) -> usize {
        self.cells.iter().filter(|c| c.class == Some(class)).count()
    }

    /// Local minima failing the perturbation test.
    pub fn unverified_minima(&self) -> usize {
        self.cells.iter().filter(|c| c.verified == Some(false)).count()
    }

    fn neighbours(&self, i: usize, j: usize) -> Vec<(usize, usize)> {
        let (rows, cols) = self.grid.shape();
        let mut out = Vec::with_capacity(5);
        if i > 0 {
            out.push((i - 1, j));
        }
        if i + 1 < rows {
            out.push((i + 1, j));
        }
        match self.grid {
            Grid::Sphere { .. } => {
                out.push((i, (j + 1) % cols));
                out.push((i, (j + cols - 1) % cols));
                if (i == 0 || i + 1 == rows) && cols % 2 == 0 {
                    out.push((i, (j + cols / 2) % cols));
                }
            }
            Grid::Weierstrass { .. } => {
                if j > 0 {
                    out.push((i, j - 1));
                }
                if j + 1 < cols {
                    out.push((i, j + 1));
                }
            }
        }
        out
    }

    /// Connected components of the cells of `class` in the grid graph
    /// (longitude wraps and cells across a pole touch on the sphere).
    pub fn components(&self, class: CriticalClass) -> usize {
        let (rows, cols) = self.grid.shape();
        let mut seen = vec![false; rows * cols];
        let mut count = 0;
        for start in 0..rows * cols {
            if seen[start] || self.cells[start].class != Some(class) {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(c) = stack.pop() {
                for (a, b) in self.neighbours(c / cols, c % cols) {
                    let n = a * cols + b;
                    if !seen[n] && self.cells[n].class == Some(class) {
                        seen[n] = true;
                        stack.push(n);
                    }
                }
            }
        }
        count
    }

    pub fn to_csv(&self) -> String {
        let dims = self.manifold.ambient_dim();
        let mut s = String::from("row,col,u,v,");
        for d in 0..dims {
            write!(s, "x{d},").unwrap();
        }
        s.push_str("s_min,member,index,class,verified\n");
        for c in &self.cells {
            write!(s, "{},{},{:.16e},{:.16e},", c.row, c.col, c.u, c.v).unwrap();
            for x in &c.coords {
                write!(s, "{x:.16e},").unwrap();
            }
            let index = c.index.map(|i| i.to_string()).unwrap_or_default();
            let verified = c.verified.map(|v| v.to_string()).unwrap_or_default();
            writeln!(s, "{:.6e},{},{index},{},{verified}", c.smallest_singular_value, c.member, c.label()).unwrap();
        }
        s
    }
}

/// Named reference configurations on `S^2`.
pub fn sphere_preset(name: &str) -> Result<ReferenceConfiguration> {
    let rows: [[f64; 3]; 3] = match name {
        "axes" => [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        "spread" => [[-0.6917, 0.7202, -0.0543], [-0.2755, -0.8778, -0.3918], [0.7522, 0.2934, 0.5901]],
        "cluster" => [[0.0, 0.0, 1.0], [0.3, 0.0, 0.95], [0.0, 0.35, 0.94]],
        other => return Err(Error::Invalid(format!("unknown sphere configuration `{other}`"))),
    };
    let m = Manifold::Sphere(2);
    let pts = rows
        .iter()
        .map(|r| m.project(DVector::from_column_slice(r)))
        .collect::<bsa_core::Result<Vec<Point>>>()?;
    Ok(ReferenceConfiguration::new(pts)?)
}

/// Named reference configurations on `H^2`, given in Weierstrass coordinates.
pub fn hyperbolic_preset(name: &str) -> Result<ReferenceConfiguration> {
    let rows: [[f64; 2]; 3] = match name {
        "triangle" => [[1.0, 0.0], [-0.5, 0.866], [-0.5, -0.866]],
        "skewed" => [[0.0, 0.0], [1.5, 0.2], [-0.4, 1.2]],
        "wide" => [[2.0, 0.5], [-1.8, 1.0], [0.3, -2.2]],
        other => return Err(Error::Invalid(format!("unknown hyperbolic configuration `{other}`"))),
    };
    let m = Manifold::Hyperbolic(2);
    let pts = rows
        .iter()
        .map(|r| m.project(hyperbolic::from_weierstrass(r)))
        .collect::<bsa_core::Result<Vec<Point>>>()?;
    Ok(ReferenceConfiguration::new(pts)?)
}

pub const SPHERE_PRESETS: [&str; 3] = ["axes", "spread", "cluster"];
pub const HYPERBOLIC_PRESETS: [&str; 3] = ["triangle", "skewed", "wide"];
