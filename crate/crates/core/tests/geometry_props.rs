use amvlab::fields::weighted_laplacian;
use amvlab::geometry::{omega_q, symmetric_ball_holds};
use amvlab::sampling::{sample_ball, PointSet};
use amvlab::{DistanceDescriptor, NormDescriptor, Polynomial, ScalarField, Term, WeightDescriptor};
use proptest::prelude::*;

fn p_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(2.0), Just(f64::INFINITY), 1.0f64..6.0]
}

fn point(n: usize, lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(lo..hi, n)
}

fn quadratic(n: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(-2.0f64..2.0, 1 + n + n * n).prop_map(move |c| {
        let mut terms = vec![Term { powers: vec![0; n], coef: c[0] }];
        for i in 0..n {
            let mut k = vec![0; n];
            k[i] = 1;
            terms.push(Term { powers: k, coef: c[1 + i] });
            for j in 0..n {
                let mut k = vec![0; n];
                k[i] += 1;
                k[j] += 1;
                terms.push(Term { powers: k, coef: c[1 + n + i * n + j] });
            }
        }
        Polynomial::new(n, &terms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn norm_distance_is_a_metric(p in p_strategy(), (x, y, z) in (1usize..5).prop_flat_map(|n| (point(n, -3.0, 3.0), point(n, -3.0, 3.0), point(n, -3.0, 3.0)))) {
        let d = DistanceDescriptor::Norm { n: x.len(), p };
        let (xy, yx) = (d.distance(&x, &y).unwrap(), d.distance(&y, &x).unwrap());
        prop_assert_eq!(xy, yx);
        let xz = d.distance(&x, &z).unwrap();
        let yz = d.distance(&y, &z).unwrap();
        prop_assert!(xz <= xy + yz + 1e-12 * (1.0 + xz));
        prop_assert_eq!(d.distance(&x, &x).unwrap(), 0.0);
    }

    #[test]
    fn warped_distance_is_a_metric(alpha in prop::collection::vec(1u8..=2, 1..4), p in p_strategy(), seed in prop::collection::vec(0.05f64..3.0, 9)) {
        let n = alpha.len();
        let d = DistanceDescriptor::AlphaWarped { alpha, p };
        let (x, y, z) = (&seed[0..n], &seed[3..3 + n], &seed[6..6 + n]);
        let xy = d.distance(x, y).unwrap();
        prop_assert_eq!(xy, d.distance(y, x).unwrap());
        prop_assert!(d.distance(x, z).unwrap() <= xy + d.distance(y, z).unwrap() + 1e-12);
    }

    #[test]
    fn asymmetric_half_line_is_a_metric(x in -3.0f64..3.0, y in -3.0f64..3.0, z in -3.0f64..3.0) {
        let d = DistanceDescriptor::AsymmetricHalfLine;
        let xy = d.distance(&[x], &[y]).unwrap();
        prop_assert_eq!(xy, d.distance(&[y], &[x]).unwrap());
        prop_assert!(d.distance(&[x], &[z]).unwrap() <= xy + d.distance(&[y], &[z]).unwrap() + 1e-12);
    }

    #[test]
    fn norm_balls_are_centrally_symmetric(p in p_strategy(), (c, v) in (1usize..4).prop_flat_map(|n| (point(n, -2.0, 2.0), point(n, -1.0, 1.0))), r in 0.01f64..1.5) {
        let d = DistanceDescriptor::Norm { n: c.len(), p };
        prop_assert!(symmetric_ball_holds(&d, &c, &v, r));
    }

    #[test]
    fn samples_lie_strictly_inside(p in p_strategy(), c in point(2, -1.0, 1.0), r in 0.01f64..2.0, seed in any::<u64>()) {
        let d = DistanceDescriptor::Norm { n: 2, p };
        let cloud = sample_ball(&d, &c, r, 64, seed, PointSet::Qmc).unwrap();
        for y in &cloud.points {
            prop_assert!(d.distance(&c, y).unwrap() < r);
        }
    }

    #[test]
    fn polynomial_derivatives_match_differences(u in quadratic(3), x in point(3, -1.0, 1.0)) {
        let f = ScalarField::Polynomial(u);
        let h = 1e-5;
        let g = f.gradient(&x).unwrap();
        let hess = f.hessian(&x).unwrap();
        for i in 0..3 {
            let mut a = x.clone();
            let mut b = x.clone();
            a[i] += h;
            b[i] -= h;
            let fd = (f.eval(&a) - f.eval(&b)) / (2.0 * h);
            prop_assert!((fd - g[i]).abs() <= 1e-6 * (1.0 + g[i].abs()));
            let gd: Vec<f64> = f.gradient(&a).unwrap().iter().zip(f.gradient(&b).unwrap()).map(|(p, q)| (p - q) / (2.0 * h)).collect();
            for j in 0..3 {
                prop_assert!((gd[j] - hess[(i, j)]).abs() <= 1e-6 * (1.0 + hess[(i, j)].abs()));
            }
        }
    }

    #[test]
    fn weighted_laplacian_is_linear(u in quadratic(2), v in quadratic(2), s in -3.0f64..3.0, a in point(2, -1.0, 1.0), x in point(2, -1.0, 1.0)) {
        let w = WeightDescriptor::ExpLinear { a };
        let lu = weighted_laplacian(&ScalarField::Polynomial(u.clone()), &w, &x).unwrap();
        let lv = weighted_laplacian(&ScalarField::Polynomial(v.clone()), &w, &x).unwrap();
        let combo = ScalarField::Polynomial(u.add(&v.scale(s)));
        let lc = weighted_laplacian(&combo, &w, &x).unwrap();
        prop_assert!((lc - (lu + s * lv)).abs() <= 1e-10 * (1.0 + lu.abs() + (s * lv).abs()));
    }
}

#[test]
fn omega_q_matches_euclidean_unit_balls() {
    for n in 1..=8 {
        let a = omega_q(n as f64);
        let b = NormDescriptor::euclidean(n).unit_ball_volume();
        assert!((a - b).abs() <= 1e-12 * b, "n = {n}: {a} vs {b}");
    }
}

#[test]
fn warped_balls_are_not_centrally_symmetric() {
    // Φ(t) = t² stretches the right half of the ball more than the left
    let d = DistanceDescriptor::AlphaWarped { alpha: vec![2], p: 2.0 };
    assert!(!symmetric_ball_holds(&d, &[1.0], &[0.23], 0.5));
    assert!(symmetric_ball_holds(&d, &[1.0], &[0.1], 0.5));
    let plane = DistanceDescriptor::AlphaWarped { alpha: vec![1, 2], p: 2.0 };
    let mut broken = 0;
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = || {
        state = amvlab::sampling::splitmix64(state);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..10_000 {
        let c = [1.0 + 2.0 * next(), 1.0 + 2.0 * next()];
        let r = 0.05 + 0.9 * next();
        let v = [2.0 * next() - 1.0, 2.0 * next() - 1.0];
        if !symmetric_ball_holds(&plane, &c, &v, r) {
            broken += 1;
        }
    }
    assert!(broken > 0);
}
