//! Kendall shape space of planar triangles.
//!
//! After removing translation (Helmert coordinates) and scale, a triangle is
//! a unit vector `(z_1, z_2)` of `C^2`; quotienting by rotations with the Hopf
//! map lands on the sphere of radius 1/2. Shapes are returned on the unit
//! sphere, i.e. scaled by [`KENDALL_SCALE`]`^{-1} = 2`.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::manifold::{Manifold, Point};
use crate::math::sqrt;

/// Radius of the Kendall shape sphere of planar triangles.
pub const KENDALL_SCALE: f64 = 0.5;

/// Shape of the triangle `(p1, p2, p3)` as a point of the unit sphere `S^2`:
/// `(|z_1|^2 - |z_2|^2, 2 Re(z_1 conj(z_2)), 2 Im(z_1 conj(z_2)))`.
pub fn kendall_shape_of_triangle(p1: [f64; 2], p2: [f64; 2], p3: [f64; 2]) -> Result<Point> {
    let s2 = sqrt(2.0);
    let s6 = sqrt(6.0);
    let z1 = [(p2[0] - p1[0]) / s2, (p2[1] - p1[1]) / s2];
    let z2 = [
        (2.0 * p3[0] - p1[0] - p2[0]) / s6,
        (2.0 * p3[1] - p1[1] - p2[1]) / s6,
    ];
    let size2 = z1[0] * z1[0] + z1[1] * z1[1] + z2[0] * z2[0] + z2[1] * z2[1];
    let scale2 = [p1, p2, p3]
        .iter()
        .map(|p| p[0] * p[0] + p[1] * p[1])
        .sum::<f64>()
        .max(1.0);
    if !(size2 > 1e-24 * scale2) || !size2.is_finite() {
        return Err(Error::Degenerate("triangle has zero size"));
    }
    let a = z1[0] * z1[0] + z1[1] * z1[1];
    let b = z2[0] * z2[0] + z2[1] * z2[1];
    // z1 * conj(z2)
    let re = z1[0] * z2[0] + z1[1] * z2[1];
    let im = z1[1] * z2[0] - z1[0] * z2[1];
    let v = DVector::from_column_slice(&[(a - b) / size2, 2.0 * re / size2, 2.0 * im / size2]);
    Manifold::Sphere(2).project(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilateral_is_a_pole() {
        let h = 3f64.sqrt() / 2.0;
        let s = kendall_shape_of_triangle([0.0, 0.0], [1.0, 0.0], [0.5, h]).unwrap();
        assert!((s.coords() - DVector::from_column_slice(&[0.0, 0.0, -1.0])).norm() < 1e-15);
        let m = kendall_shape_of_triangle([0.0, 0.0], [1.0, 0.0], [0.5, -h]).unwrap();
        assert!((m.coords()[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn similarity_invariance() {
        let a = kendall_shape_of_triangle([0.0, 0.0], [2.0, 0.3], [0.7, 1.1]).unwrap();
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let t = |p: [f64; 2]| {
            [
                3.0 * (c * p[0] - s * p[1]) + 5.0,
                3.0 * (s * p[0] + c * p[1]) - 2.0,
            ]
        };
        let b = kendall_shape_of_triangle(t([0.0, 0.0]), t([2.0, 0.3]), t([0.7, 1.1])).unwrap();
        assert!((a.coords() - b.coords()).norm() < 1e-12);
    }

    #[test]
    fn degenerate_triangle_rejected() {
        assert!(kendall_shape_of_triangle([1.0, 1.0], [1.0, 1.0], [1.0, 1.0]).is_err());
    }
}
