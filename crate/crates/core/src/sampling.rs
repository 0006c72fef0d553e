//! Random points for the synthetic experiments.

use nalgebra::DVector;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::manifold::{Manifold, Point};

/// Maximum number of proposals drawn by [`uniform_triangle_sample`].
pub const MAX_PROPOSALS: usize = 1_000_000;

/// Deterministic generator for a seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// `exp(center, v)` with `v` isotropic Gaussian in the tangent space:
/// each coordinate in an orthonormal tangent frame has standard deviation `sigma`.
pub fn wrapped_gaussian_sample<R: Rng + ?Sized>(
    center: &Point,
    sigma: f64,
    rng: &mut R,
) -> Result<Point> {
    if !(sigma >= 0.0) {
        return Err(Error::InvalidArgument("sigma must be non-negative"));
    }
    if sigma == 0.0 {
        return Ok(center.clone());
    }
    let normal = Normal::new(0.0, sigma).map_err(|_| Error::InvalidArgument("invalid sigma"))?;
    let basis = center.tangent_basis();
    let n = center.manifold().dim();
    let c = DVector::from_fn(n, |_, _| normal.sample(rng));
    Ok(center.exp(&center.project_tangent(&basis.vector(&c))))
}

/// Uniform sample from the spherical triangle `abc`.
///
/// Proposals are uniform on the planar triangle through `a, b, c` and are
/// accepted with probability `(h / |p|)^3`, `h` being the distance of that
/// plane to the origin; radial projection then gives the uniform law on the
/// sphere.
pub fn uniform_triangle_sample<R: Rng + ?Sized>(
    a: &Point,
    b: &Point,
    c: &Point,
    rng: &mut R,
) -> Result<Point> {
    let m = a.manifold();
    if !matches!(m, Manifold::Sphere(_)) || b.manifold() != m || c.manifold() != m {
        return Err(Error::InvalidArgument(
            "triangle sampling needs three points of one sphere",
        ));
    }
    for (p, q) in [(a, b), (b, c), (a, c)] {
        if p.cut_locus_clearance(q) < crate::sphere::CUT_LOCUS_TOL {
            return Err(Error::Degenerate("antipodal triangle vertices"));
        }
    }
    let (pa, pb, pc) = (a.coords(), b.coords(), c.coords());
    let u = pb - pa;
    let un = u.norm();
    if un < 1e-12 {
        return Err(Error::Degenerate("coincident triangle vertices"));
    }
    let u = u / un;
    let mut v = pc - pa;
    v -= &u * u.dot(&v);
    let vn = v.norm();
    if vn < 1e-12 {
        return Err(Error::Degenerate("collinear triangle vertices"));
    }
    let v = v / vn;
    let mut normal = pa.clone();
    normal -= &u * u.dot(pa);
    normal -= &v * v.dot(pa);
    let h = normal.norm();
    if h < 1e-12 {
        return Err(Error::Degenerate(
            "triangle plane passes through the origin",
        ));
    }
    for _ in 0..MAX_PROPOSALS {
        let mut s: f64 = rng.random();
        let mut t: f64 = rng.random();
        if s + t > 1.0 {
            s = 1.0 - s;
            t = 1.0 - t;
        }
        let p = pa * (1.0 - s - t) + pb * s + pc * t;
        let ratio = h / p.norm();
        if rng.random::<f64>() < ratio * ratio * ratio {
            return m.project(p);
        }
    }
    Err(Error::SamplingExhausted(MAX_PROPOSALS))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_sigma_is_center() {
        let x = Manifold::Sphere(3).origin();
        let mut rng = seeded_rng(1);
        assert_eq!(wrapped_gaussian_sample(&x, 0.0, &mut rng).unwrap(), x);
    }

    #[test]
    fn triangle_samples_stay_in_the_subsphere() {
        let m = Manifold::Sphere(5);
        let e = |i: usize| {
            let mut c = DVector::zeros(6);
            c[i] = 1.0;
            m.point(c).unwrap()
        };
        let mut rng = seeded_rng(3);
        for _ in 0..100 {
            let p = uniform_triangle_sample(&e(0), &e(1), &e(2), &mut rng).unwrap();
            assert!(p.coords().rows(3, 3).norm() == 0.0);
            assert!(p.coords().rows(0, 3).iter().all(|&v| v >= 0.0));
        }
    }
}
