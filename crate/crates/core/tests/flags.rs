mod common;

use bsa_core::barycentric::ReferenceConfiguration;
use bsa_core::flags::*;
use bsa_core::{Manifold, Point};
use common::*;
use nalgebra::{DMatrix, DVector};
use rand::RngCore;

fn diag_dataset() -> Vec<Point> {
    let (a, b, c) = (12f64.sqrt(), 3f64.sqrt(), 0.75f64.sqrt());
    vec![
        e(&[a, 0.0, 0.0]),
        e(&[-a, 0.0, 0.0]),
        e(&[0.0, b, 0.0]),
        e(&[0.0, -b, 0.0]),
        e(&[0.0, 0.0, c]),
        e(&[0.0, 0.0, -c]),
    ]
}

#[test]
fn auv_of_diagonal_example() {
    let data = diag_dataset();
    let flag = Flag::strict(vec![e(&[0.0; 3]), e(&[1.0, 0.0, 0.0])], &[0, 1]).unwrap();
    let v = flag_variances(&flag, &data).unwrap();
    assert!((v[0] - 5.25).abs() < 1e-12 && (v[1] - 1.25).abs() < 1e-12);
    assert!((auv(&flag, &data).unwrap() - 6.5).abs() < 1e-12);
    assert!((pca_auv_closed_form(&[4.0, 1.0, 0.25], 1) - 6.5).abs() < 1e-15);
    let pca = euclidean_pca_flag(&data, 1).unwrap();
    assert!((pca.direct_auv - 6.5).abs() < 1e-12);
    assert!((pca.closed_form_auv - 6.5).abs() < 1e-12);
    assert!(!pca.degenerate_spectrum);
    let pure = Flag::pure(flag.pool().to_vec(), &[0, 1]).unwrap();
    assert!((auv(&pure, &data).unwrap() - 2.0 * 1.25).abs() < 1e-12);
}

#[test]
fn pca_span_leaves_the_tail_variance() {
    let mut r = rng(40);
    let data = anisotropic(&mut r, 80, &[3.0, 2.0, 1.0, 0.5, 0.2]);
    for k in 0..5 {
        let pca = euclidean_pca_flag(&data, k).unwrap();
        let tail: f64 = pca.eigenvalues[k..].iter().sum();
        let last = *pca.result.per_level_unexplained_variance.last().unwrap();
        assert!((last - tail).abs() < 1e-10 * (1.0 + tail));
    }
}

#[test]
fn dual_route_auv_agrees() {
    let mut r = rng(41);
    for _ in 0..100 {
        let n = 2 + (uniform(&mut r, 0.0, 5.0) as usize);
        let count = 10 + (uniform(&mut r, 0.0, 50.0) as usize);
        let scales: Vec<f64> = (0..n).map(|_| uniform(&mut r, 0.1, 3.0)).collect();
        let data = anisotropic(&mut r, count, &scales);
        let k = uniform(&mut r, 0.0, n as f64) as usize;
        let pca = euclidean_pca_flag(&data, k).unwrap();
        let rel = (pca.direct_auv - pca.closed_form_auv).abs() / pca.closed_form_auv.abs();
        assert!(rel <= 1e-10, "{rel}");
        assert_eq!(pca.result.auv, pca.direct_auv);
    }
}

#[test]
fn pca_flag_beats_random_flags() {
    let mut r = rng(42);
    let data = anisotropic(&mut r, 200, &[2.5, 1.8, 1.2, 0.9, 0.5, 0.3]);
    let k = 3;
    let pca = euclidean_pca_flag(&data, k).unwrap();
    for _ in 0..1000 {
        let q = haar_frame(&mut r, 6);
        let origin = &pca.mean + gaussian(&mut r, 6) * 0.3;
        let dirs: Vec<DVector<f64>> = (0..k).map(|j| q.column(j).into_owned()).collect();
        let a = auv(&frame_flag(&origin, &dirs), &data).unwrap();
        assert!(pca.direct_auv <= a + 1e-12);
    }
}

#[test]
fn eigenvector_swaps_increase_auv() {
    let mut r = rng(43);
    let data = anisotropic(&mut r, 150, &[3.0, 2.2, 1.5, 1.0, 0.6]);
    let n = 5;
    let k = 2;
    let pca = euclidean_pca_flag(&data, k).unwrap();
    let base = frame_flag(&pca.mean, &(0..k).map(|j| pca.eigenvectors.column(j).into_owned()).collect::<Vec<_>>());
    let base_auv = auv(&base, &data).unwrap();
    let mut tested = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if i >= k {
                continue;
            }
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(i, j);
            let dirs: Vec<DVector<f64>> = perm[..k].iter().map(|&p| pca.eigenvectors.column(p).into_owned()).collect();
            let swapped = auv(&frame_flag(&pca.mean, &dirs), &data).unwrap();
            assert!(pca.eigenvalues[i] > pca.eigenvalues[j]);
            assert!(swapped > base_auv, "({i},{j}) {swapped} <= {base_auv}");
            tested += 1;
        }
    }
    assert_eq!(tested, 7);
}

#[test]
fn affine_qr_example_and_prefix_stability() {
    let cfg = ReferenceConfiguration::new(vec![e(&[0.0, 0.0, 0.0]), e(&[1.0, 0.0, 0.0]), e(&[1.0, 1.0, 0.0])]).unwrap();
    let qr = qr_affine_decompose(&cfg).unwrap();
    assert_eq!(qr.q.column(0).norm(), 0.0);
    assert!((qr.q.column(1) - DVector::from_column_slice(&[1.0, 0.0, 0.0])).norm() < 1e-15);
    assert!((qr.q.column(2) - DVector::from_column_slice(&[0.0, 1.0, 0.0])).norm() < 1e-15);
    assert!((qr.t[(1, 1)] - 1.0).abs() < 1e-15 && (qr.t[(1, 2)] - 1.0).abs() < 1e-15 && (qr.t[(2, 2)] - 1.0).abs() < 1e-15);
    let single = qr_affine_decompose(&ReferenceConfiguration::new(vec![e(&[2.0, 1.0])]).unwrap()).unwrap();
    assert_eq!(single.t, DMatrix::zeros(1, 1));

    let mut r = rng(44);
    for _ in 0..50 {
        let pts = anisotropic(&mut r, 4, &[1.0; 5]);
        let full = qr_affine_decompose(&ReferenceConfiguration::new(pts.clone()).unwrap()).unwrap();
        let rebuilt = DMatrix::from_fn(5, 4, |i, _| full.origin[i]) + &full.q * &full.t;
        assert!((rebuilt - ReferenceConfiguration::new(pts.clone()).unwrap().matrix()).norm() < 1e-12);
        assert!((full.q.columns(1, 3).transpose() * full.q.columns(1, 3) - DMatrix::identity(3, 3)).norm() < 1e-12);
        for i in 1..4 {
            let part = qr_affine_decompose(&ReferenceConfiguration::new(pts[..=i].to_vec()).unwrap()).unwrap();
            assert!((part.q - full.q.columns(0, i + 1)).norm() < 1e-12);
            assert!((part.t - full.t.view((0, 0), (i + 1, i + 1))).norm() < 1e-12);
        }
    }
    let dep = ReferenceConfiguration::new_unchecked(vec![e(&[0.0, 0.0]), e(&[1.0, 0.0]), e(&[2.0, 0.0])]).unwrap();
    assert_eq!(qr_affine_decompose(&dep).unwrap_err(), bsa_core::Error::DependentPoints);
}

#[test]
fn small_instances_match_brute_force() {
    for (s, m) in [Manifold::Euclidean(3), Manifold::Sphere(3), Manifold::Hyperbolic(3)].into_iter().enumerate() {
        for trial in 0..3 {
            let mut r = rng(100 + 10 * s as u64 + trial);
            let c = random_point(m, &mut r, 1.0);
            let data: Vec<Point> = (0..8)
                .map(|_| jitter(&c, &mut r, 0.1, 1.0))
                .collect();
            for k in 0..=2 {
                let pbs = optimal_pure_subspace(&data, k, DEFAULT_BUDGET, 0).unwrap();
                assert!(pbs.diagnostics.exhaustive);
                let (subset, v) = brute_pbs(&data, k);
                let mut got = pbs.reference_indices.clone();
                got.sort_unstable();
                assert_eq!(got, subset, "{m} k={k}");
                assert!((pbs.pure_subspace_auv.unwrap() - (k + 1) as f64 * v).abs() < 1e-10 * (1.0 + v));
                assert_eq!(pbs.reference_indices, brute_backward(&data, &subset), "{m} k={k}");

                let bsa = bsa_flag_search(&data, k, DEFAULT_BUDGET, 0).unwrap();
                assert!(bsa.diagnostics.exhaustive);
                let (tuple, a) = brute_bsa(&data, k);
                assert_eq!(bsa.reference_indices, tuple, "{m} k={k}");
                assert!((bsa.auv - a).abs() < 1e-10 * (1.0 + a));
            }
        }
    }
}

#[test]
fn zero_order_pure_subspace_is_the_sample_mean() {
    let mut r = rng(45);
    let data = anisotropic(&mut r, 15, &[1.0, 2.0]);
    let pbs = optimal_pure_subspace(&data, 0, DEFAULT_BUDGET, 0).unwrap();
    let best = (0..data.len())
        .min_by(|&a, &b| {
            let f = |i: usize| data.iter().map(|y| y.dist(&data[i]).powi(2)).sum::<f64>();
            f(a).total_cmp(&f(b))
        })
        .unwrap();
    assert_eq!(pbs.reference_indices, vec![best]);
    assert_eq!(pbs.diagnostics.evaluated, 15);
}

#[test]
fn pure_subspace_finds_a_great_circle() {
    let mut r = rng(46);
    let m = Manifold::Sphere(5);
    let mut data: Vec<Point> = (0..12)
        .map(|i| {
            let t = i as f64 * 0.4;
            let mut v = DVector::zeros(6);
            v[0] = t.cos();
            v[1] = t.sin();
            m.point(v).unwrap()
        })
        .collect();
    for _ in 0..4 {
        data.push(random_point(m, &mut r, 1.0));
    }
    let pbs = optimal_pure_subspace(&data, 1, DEFAULT_BUDGET, 0).unwrap();
    assert!(pbs.reference_indices.iter().all(|&i| i < 12));
    let cfg = ReferenceConfiguration::new(pbs.reference_indices.iter().map(|&i| data[i].clone()).collect()).unwrap();
    assert!(unexplained_variance(&cfg, &data[..12]).unwrap() < 1e-20);
}

#[test]
fn forward_analysis_properties() {
    let sym = vec![e(&[-1.0, 0.0]), e(&[1.0, 0.0]), e(&[0.0, 0.1])];
    assert_eq!(forward_bsa(&sym, 0).unwrap().reference_indices, vec![2]);

    let mut r = rng(47);
    for m in [Manifold::Sphere(4), Manifold::Hyperbolic(4), Manifold::Euclidean(4)] {
        let c = random_point(m, &mut r, 1.0);
        let data: Vec<Point> = (0..20).map(|_| jitter(&c, &mut r, 0.1, 0.8)).collect();
        let fbs = forward_bsa(&data, 3).unwrap();
        assert_eq!(fbs.method, Method::Fbs);
        let lv = &fbs.per_level_unexplained_variance;
        assert!(lv.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!((fbs.auv - lv.iter().sum::<f64>()).abs() < 1e-12);
        let flag = Flag::strict(data.clone(), &fbs.reference_indices).unwrap();
        assert!(flag.nesting_defect().unwrap() < 1e-9);
        let direct = flag_variances(&flag, &data).unwrap();
        assert!(direct.iter().zip(lv).all(|(a, b)| (a - b).abs() < 1e-12));
        let first = (0..20)
            .min_by(|&a, &b| {
                let f = |i: usize| data.iter().map(|y| y.dist(&data[i]).powi(2)).sum::<f64>();
                f(a).total_cmp(&f(b))
            })
            .unwrap();
        assert_eq!(fbs.reference_indices[0], first);
        assert_eq!(forward_bsa(&data, 3).unwrap(), fbs);

        let bsa = bsa_flag_search(&data, 2, DEFAULT_BUDGET, 0).unwrap();
        let fbs2 = forward_bsa(&data, 2).unwrap();
        assert!(bsa.auv <= fbs2.auv + 1e-12);
        for _ in 0..50 {
            let t = sample_tuples(20, 3, 1, true, r.next_u64()).remove(0);
            let flag = Flag::strict(data.clone(), &t).unwrap();
            assert!(bsa.auv <= auv(&flag, &data).unwrap() + 1e-12);
            let v = flag_variances(&flag, &data).unwrap();
            assert!(v.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        }
    }
}

#[test]
fn sampled_searches_are_deterministic() {
    let mut r = rng(48);
    let m = Manifold::Sphere(3);
    let c = random_point(m, &mut r, 1.0);
    let data: Vec<Point> = (0..25).map(|_| jitter(&c, &mut r, 0.6, 0.6)).collect();
    let a = bsa_flag_search(&data, 2, 500, 9).unwrap();
    let b = bsa_flag_search(&data, 2, 500, 9).unwrap();
    assert_eq!(a, b);
    assert!(!a.diagnostics.exhaustive);
    assert_eq!(a.diagnostics.candidates, 25 * 24 * 23);
    assert!(a.diagnostics.evaluated <= 500);
    let p = optimal_pure_subspace(&data, 2, 300, 9).unwrap();
    assert_eq!(p, optimal_pure_subspace(&data, 2, 300, 9).unwrap());
    assert!(!p.diagnostics.exhaustive && p.diagnostics.evaluated <= 300);
    let full = optimal_pure_subspace(&data, 2, DEFAULT_BUDGET, 9).unwrap();
    assert!(full.pure_subspace_auv.unwrap() <= p.pure_subspace_auv.unwrap());
}

#[test]
fn search_errors() {
    let data = vec![e(&[0.0]), e(&[1.0])];
    assert!(matches!(optimal_pure_subspace(&data, 2, 10, 0), Err(bsa_core::Error::InsufficientData(_))));
    let same = vec![e(&[1.0, 1.0]); 4];
    assert_eq!(bsa_flag_search(&same, 1, DEFAULT_BUDGET, 0).unwrap_err(), bsa_core::Error::NoIndependentTuple);
    assert_eq!(optimal_pure_subspace(&same, 1, DEFAULT_BUDGET, 0).unwrap_err(), bsa_core::Error::NoIndependentTuple);
}
