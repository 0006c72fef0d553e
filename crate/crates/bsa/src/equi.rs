//! Synthetic "Equi" datasets: uniform samples of an equilateral spherical
//! triangle in the first three coordinates, blurred by wrapped Gaussian noise.

use std::f64::consts::{FRAC_PI_2, PI};

use bsa_core::sampling::{seeded_rng, uniform_triangle_sample, wrapped_gaussian_sample};
use bsa_core::{Manifold, Point};
use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::io::DatasetFile;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquiConfig {
    pub n_points: usize,
    pub ambient_dim: usize,
    /// Geodesic side length of the triangle.
    pub side: f64,
    /// Noise standard deviation per tangent coordinate, radians.
    pub sigma: f64,
    pub seed: u64,
}

impl Default for EquiConfig {
    fn default() -> Self {
        EquiConfig {
            n_points: 30,
            ambient_dim: 6,
            side: FRAC_PI_2,
            sigma: 10f64.to_radians(),
            seed: 0,
        }
    }
}

impl EquiConfig {
    /// Expected squared distance to the great 2-subsphere of the triangle for
    /// small noise: `(n - 2) sigma^2`.
    pub fn normal_noise_variance(&self) -> f64 {
        (self.ambient_dim - 3) as f64 * self.sigma * self.sigma
    }
}

/// Vertices of the equilateral triangle with the given side, symmetric about
/// `(1,1,1)/sqrt(3)`; for side `pi/2` these are `e1, e2, e3`.
pub fn equilateral_vertices(ambient_dim: usize, side: f64) -> Result<[Point; 3]> {
    if ambient_dim < 3 {
        return Err(Error::Invalid("ambient dimension must be at least 3".into()));
    }
    if !(side > 0.0 && side < 2.0 * PI / 3.0) {
        return Err(Error::Invalid("side must lie in (0, 2 pi / 3)".into()));
    }
    // cos(side) = cos^2(rho) - sin^2(rho) / 2 for vertices at angle rho from the axis.
    let rho = ((1.0 - side.cos()) / 1.5).sqrt().asin();
    let axis = [1.0, 1.0, 1.0].map(|v: f64| v / 3f64.sqrt());
    let u = [2.0, -1.0, -1.0].map(|v: f64| v / 6f64.sqrt());
    let w = [0.0, 1.0, -1.0].map(|v: f64| v / 2f64.sqrt());
    let m = Manifold::Sphere(ambient_dim - 1);
    let vertex = |phi: f64| {
        let mut c = DVector::zeros(ambient_dim);
        for i in 0..3 {
            c[i] = rho.cos() * axis[i] + rho.sin() * (phi.cos() * u[i] + phi.sin() * w[i]);
        }
        m.project(c)
    };
    Ok([vertex(0.0)?, vertex(2.0 * PI / 3.0)?, vertex(4.0 * PI / 3.0)?])
}

pub fn generate_equi(cfg: &EquiConfig) -> Result<DatasetFile> {
    if cfg.n_points == 0 {
        return Err(Error::Invalid("n_points must be positive".into()));
    }
    let [a, b, c] = equilateral_vertices(cfg.ambient_dim, cfg.side)?;
    let mut rng = seeded_rng(cfg.seed);
    let mut points = Vec::with_capacity(cfg.n_points);
    for _ in 0..cfg.n_points {
        let s = uniform_triangle_sample(&a, &b, &c, &mut rng)?;
        points.push(wrapped_gaussian_sample(&s, cfg.sigma, &mut rng)?);
    }
    let mut d = DatasetFile::new(Manifold::Sphere(cfg.ambient_dim - 1), points);
    d.seed = Some(cfg.seed);
    d.comments.push(format!(
        "equi: n_points={} side={:.16e} sigma={:.16e}",
        cfg.n_points, cfg.side, cfg.sigma
    ));
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_angled_triangle_is_the_axes() {
        let [a, b, c] = equilateral_vertices(4, FRAC_PI_2).unwrap();
        let mut sorted: Vec<Vec<f64>> = [a, b, c].iter().map(|p| p.coords().iter().copied().collect()).collect();
        sorted.sort_by(|x, y| y.partial_cmp(x).unwrap());
        for (i, v) in sorted.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert!((x - if i == j { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn sides_match() {
        for side in [0.3, 1.0, FRAC_PI_2, 2.0] {
            let [a, b, c] = equilateral_vertices(6, side).unwrap();
            for d in [a.dist(&b), b.dist(&c), a.dist(&c)] {
                assert!((d - side).abs() < 1e-12);
            }
        }
        assert!(equilateral_vertices(2, 1.0).is_err());
        assert!(equilateral_vertices(3, 2.5).is_err());
    }

    #[test]
    fn noise_free_points_stay_in_the_subsphere() {
        let cfg = EquiConfig { sigma: 0.0, seed: 3, ..Default::default() };
        let d = generate_equi(&cfg).unwrap();
        assert_eq!(d.points.len(), 30);
        for p in &d.points {
            assert!(p.coords().rows(3, 3).amax() < 1e-12);
        }
        assert_eq!(generate_equi(&cfg).unwrap(), d);
    }
}
