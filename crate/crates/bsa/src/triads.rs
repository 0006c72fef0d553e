//! Planar landmark triads mapped to Kendall's shape sphere.
//!
//! Input: one triad per line, six numbers `x1 y1 x2 y2 x3 y3` separated by
//! commas or whitespace; `#` starts a comment line.

use std::fs;
use std::path::Path;

use bsa_core::kendall::{kendall_shape_of_triangle, KENDALL_SCALE};
use bsa_core::Manifold;

use crate::error::{Error, Result};
use crate::io::DatasetFile;

pub type Triad = [[f64; 2]; 3];

pub fn parse_triads(text: &str) -> Result<Vec<(usize, Triad)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let vals = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(str::parse::<f64>)
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::parse(line_no, format!("bad number: {e}")))?;
        if vals.len() != 6 {
            return Err(Error::parse(line_no, format!("expected 6 coordinates, found {}", vals.len())));
        }
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::parse(line_no, "non-finite coordinate"));
        }
        out.push((line_no, [[vals[0], vals[1]], [vals[2], vals[3]], [vals[4], vals[5]]]));
    }
    Ok(out)
}

/// Shapes on the unit sphere, with the rescaling from radius `1/2` recorded.
pub fn triads_to_dataset(triads: &[(usize, Triad)]) -> Result<DatasetFile> {
    let mut points = Vec::with_capacity(triads.len());
    for (line, t) in triads {
        let p = kendall_shape_of_triangle(t[0], t[1], t[2])
            .map_err(|e| Error::parse(*line, e.to_string()))?;
        points.push(p);
    }
    let mut d = DatasetFile::new(Manifold::Sphere(2), points);
    d.scale = Some(1.0 / KENDALL_SCALE);
    d.comments
        .push("kendall shapes of planar triads, rescaled from the sphere of radius 1/2".into());
    Ok(d)
}

pub fn ingest_triads(path: &Path) -> Result<DatasetFile> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut d = triads_to_dataset(&parse_triads(&text)?)?;
    d.comments.push(format!("source: {}", path.display()));
    Ok(d)
}
