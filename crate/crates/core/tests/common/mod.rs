//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use bsa_core::barycentric::ReferenceConfiguration;
use bsa_core::flags::Flag;
use bsa_core::{hyperbolic, Manifold, Point};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, len: usize) -> DVector<f64> {
    DVector::from_fn(len, |_, _| StandardNormal.sample(rng))
}

/// Sphere: uniform. Hyperboloid: Weierstrass coordinates `N(0, scale^2)`.
/// Euclidean: `N(0, scale^2)`.
pub fn random_point(m: Manifold, rng: &mut ChaCha8Rng, scale: f64) -> Point {
    match m {
        Manifold::Sphere(_) => m.project(gaussian(rng, m.ambient_dim())).unwrap(),
        Manifold::Hyperbolic(n) => {
            let xh = gaussian(rng, n) * scale;
            m.point(hyperbolic::from_weierstrass(xh.as_slice())).unwrap()
        }
        Manifold::Euclidean(n) => m.point(gaussian(rng, n) * scale).unwrap(),
    }
}

/// Tangent vector at `x` with coordinates `N(0, 1)` in the orthonormal frame,
/// rescaled to norm `len`.
pub fn random_tangent(x: &Point, rng: &mut ChaCha8Rng, len: f64) -> DVector<f64> {
    let c = gaussian(rng, x.manifold().dim());
    let c = &c / c.norm() * len;
    x.tangent_basis().vector(&c)
}

/// Point of the chart `c -> retract(x, B c)` around `x`.
pub fn chart(x: &Point, c: &DVector<f64>) -> Point {
    x.retract(&x.tangent_basis().vector(c))
}

/// Central-difference gradient of `f` in the chart at `x`.
pub fn fd_gradient(f: &dyn Fn(&Point) -> f64, x: &Point, h: f64) -> DVector<f64> {
    let n = x.manifold().dim();
    DVector::from_fn(n, |i, _| {
        let mut e = DVector::zeros(n);
        e[i] = h;
        (f(&chart(x, &e)) - f(&chart(x, &-e))) / (2.0 * h)
    })
}

/// Central-difference Hessian of `f` in the chart at `x`. The chart agrees
/// with the exponential map to second order, so at any point this is the
/// Riemannian Hessian in the orthonormal frame.
pub fn fd_hessian(f: &dyn Fn(&Point) -> f64, x: &Point, h: f64) -> DMatrix<f64> {
    let n = x.manifold().dim();
    let e = |i: usize| {
        let mut v = DVector::zeros(n);
        v[i] = h;
        v
    };
    let f0 = f(x);
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        let (p, q) = (f(&chart(x, &e(i))), f(&chart(x, &-e(i))));
        m[(i, i)] = (p - 2.0 * f0 + q) / (h * h);
        for j in 0..i {
            let pp = f(&chart(x, &(e(i) + e(j))));
            let pm = f(&chart(x, &(e(i) - e(j))));
            let mp = f(&chart(x, &(-e(i) + e(j))));
            let mm = f(&chart(x, &(-e(i) - e(j))));
            let v = (pp - pm - mp + mm) / (4.0 * h * h);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// `sum_i lambda_i log_x(x_i)` by direct summation of logs.
pub fn direct_moment(refs: &[Point], x: &Point, lambda: &[f64]) -> DVector<f64> {
    let mut acc = DVector::zeros(x.coords().len());
    for (r, l) in refs.iter().zip(lambda) {
        acc += x.log(r).unwrap().vec() * *l;
    }
    acc
}

/// Unit vector of `R^{dim}` along axis `i`, as a sphere point.
pub fn axis(dim: usize, i: usize) -> Point {
    let mut c = DVector::zeros(dim);
    c[i] = 1.0;
    Manifold::Sphere(dim - 1).point(c).unwrap()
}

pub fn rel_err(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

pub fn s5_axes() -> ReferenceConfiguration {
    ReferenceConfiguration::new(vec![axis(6, 0), axis(6, 1), axis(6, 2)]).unwrap()
}

pub fn random_in_axes_span(r: &mut ChaCha8Rng) -> Point {
    loop {
        let mut c = DVector::zeros(6);
        c.rows_mut(0, 3).copy_from(&gaussian(r, 3));
        let p = Manifold::Sphere(5).project(c).unwrap();
        if (0..3).all(|i| (p.coords()[i] + 1.0).abs() > 1e-6 && p.dist(&axis(6, i)) < PI - 1e-6) {
            return p;
        }
    }
}

/// Random cluster of `count` points within `radius` of a random centre.
pub fn cluster(m: Manifold, r: &mut ChaCha8Rng, count: usize, radius: f64) -> Vec<Point> {
    let c = random_point(m, r, 1.0);
    (0..count)
        .map(|_| {
            let len = uniform(r, 0.05, radius);
            c.exp(&c.project_tangent(&random_tangent(&c, r, len)))
        })
        .collect()
}

/// Least-squares oracle for EBS weights of a point on the linear span:
/// solve `X lt = x`, then divide by `theta / sin(theta)` (or `sinh`).
pub fn oracle_weights(cfg: &ReferenceConfiguration, x: &Point) -> Vec<f64> {
    let xm = cfg.matrix();
    let svd = xm.clone().svd(true, true);
    let lt = svd.solve(x.coords(), 1e-14).unwrap();
    cfg.points()
        .iter()
        .zip(lt.iter())
        .map(|(p, l)| {
            let t = x.dist(p);
            let f = match x.manifold() {
                Manifold::Sphere(_) if t > 0.0 => t / t.sin(),
                Manifold::Hyperbolic(_) if t > 0.0 => t / t.sinh(),
                _ => 1.0,
            };
            l / f
        })
        .collect()
}

pub fn e(c: &[f64]) -> Point {
    Manifold::Euclidean(c.len()).point_from_slice(c).unwrap()
}

pub fn anisotropic(r: &mut ChaCha8Rng, count: usize, scales: &[f64]) -> Vec<Point> {
    let n = scales.len();
    let shift = gaussian(r, n);
    (0..count)
        .map(|_| {
            let g = gaussian(r, n);
            Manifold::Euclidean(n)
                .point(DVector::from_iterator(n, (0..n).map(|i| shift[i] + scales[i] * g[i])))
                .unwrap()
        })
        .collect()
}

pub fn jitter(c: &Point, r: &mut ChaCha8Rng, lo: f64, hi: f64) -> Point {
    let len = uniform(r, lo, hi);
    c.exp(&c.project_tangent(&random_tangent(c, r, len)))
}

pub fn haar_frame(r: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_iterator(n, n, gaussian(r, n * n).iter().copied());
    g.qr().q()
}

pub fn frame_flag(origin: &DVector<f64>, dirs: &[DVector<f64>]) -> Flag {
    let n = origin.len();
    let mut pool = vec![Manifold::Euclidean(n).point(origin.clone()).unwrap()];
    for d in dirs {
        pool.push(Manifold::Euclidean(n).point(origin + d).unwrap());
    }
    let order: Vec<usize> = (0..pool.len()).collect();
    Flag::strict(pool, &order).unwrap()
}

// Naive brute-force oracle: projections from normal equations, no shared code.
pub fn oracle_residual(m: Manifold, refs: &[&Point], y: &Point) -> f64 {
    let cols = refs.len();
    let dim = m.ambient_dim();
    let yv = y.coords();
    match m {
        Manifold::Euclidean(_) => {
            let x0 = refs[0].coords();
            if cols == 1 {
                return (yv - x0).norm();
            }
            let a = DMatrix::from_fn(dim, cols - 1, |i, j| refs[j + 1].coords()[i] - x0[i]);
            let pinv = a.clone().pseudo_inverse(1e-13).unwrap();
            let d = yv - x0;
            (&d - &a * (&pinv * &d)).norm()
        }
        Manifold::Sphere(_) => {
            let x = DMatrix::from_fn(dim, cols, |i, j| refs[j].coords()[i]);
            let p = &x * (x.clone().pseudo_inverse(1e-13).unwrap() * yv);
            (yv - &p).norm().atan2(p.norm())
        }
        Manifold::Hyperbolic(_) => {
            let x = DMatrix::from_fn(dim, cols, |i, j| refs[j].coords()[i]);
            let j = hyperbolic::metric(dim);
            let g = x.transpose() * &j * &x;
            let c = g.try_inverse().unwrap() * (x.transpose() * &j * yv);
            let w = yv - &x * c;
            let q = (w.transpose() * &j * &w)[0];
            q.max(0.0).sqrt().asinh()
        }
    }
}

pub fn oracle_variance(data: &[Point], idx: &[usize]) -> f64 {
    let refs: Vec<&Point> = idx.iter().map(|&i| &data[i]).collect();
    data.iter().map(|y| oracle_residual(data[0].manifold(), &refs, y).powi(2)).sum::<f64>() / data.len() as f64
}

pub fn ordered_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for t in &out {
            for i in 0..n {
                if !t.contains(&i) {
                    let mut u = t.clone();
                    u.push(i);
                    next.push(u);
                }
            }
        }
        out = next;
    }
    out
}

pub fn brute_pbs(data: &[Point], k: usize) -> (Vec<usize>, f64) {
    let mut best: Option<(Vec<usize>, f64)> = None;
    for t in ordered_tuples(data.len(), k + 1) {
        if t.windows(2).any(|w| w[0] > w[1]) {
            continue;
        }
        let v = oracle_variance(data, &t);
        if best.as_ref().is_none_or(|b| v < b.1) {
            best = Some((t, v));
        }
    }
    best.unwrap()
}

pub fn brute_backward(data: &[Point], subset: &[usize]) -> Vec<usize> {
    let mut rem = subset.to_vec();
    let mut removed = vec![];
    while rem.len() > 1 {
        let mut best = (usize::MAX, f64::INFINITY);
        for p in 0..rem.len() {
            let mut rest = rem.clone();
            rest.remove(p);
            let v = oracle_variance(data, &rest);
            if v < best.1 {
                best = (p, v);
            }
        }
        removed.push(rem.remove(best.0));
    }
    removed.reverse();
    rem.extend(removed);
    rem
}

pub fn brute_bsa(data: &[Point], k: usize) -> (Vec<usize>, f64) {
    let mut best: Option<(Vec<usize>, f64)> = None;
    for t in ordered_tuples(data.len(), k + 1) {
        let a: f64 = (1..=t.len()).map(|l| oracle_variance(data, &t[..l])).sum();
        if best.as_ref().is_none_or(|b| a < b.1) {
            best = Some((t, a));
        }
    }
    best.unwrap()
}

/// Basis of the Minkowski orthogonal complement of `Span(X)`, i.e. the null
/// space of `(J X)^T`, completed from the identity by Gram-Schmidt.
pub fn minkowski_normals(cfg: &ReferenceConfiguration) -> Vec<DVector<f64>> {
    let n = cfg.matrix().nrows();
    let jx = hyperbolic::metric(n) * cfg.matrix();
    let vt = jx.transpose().svd(false, true).v_t.unwrap();
    let mut basis: Vec<DVector<f64>> = (0..vt.nrows()).map(|i| vt.row(i).transpose()).collect();
    let mut out = Vec::new();
    for j in 0..n {
        let mut v = DVector::zeros(n);
        v[j] = 1.0;
        for b in &basis {
            let c = b.dot(&v);
            v -= b * c;
        }
        if v.norm() > 1e-6 {
            let v = v.normalize();
            basis.push(v.clone());
            out.push(v);
        }
    }
    out
}
