use acit_core::oracle::{oracle_closest, oracle_decide, Decision};
use acit_core::{check_certificate, solve, AcitParams, Certificate, Float, Inequality, Point, Rational, SampleRule};
use proptest::prelude::*;

type Q = Rational;

fn ints(d: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((lo..=hi).prop_map(|v| Q::from_integer(v.into())), d)
}

fn instance() -> impl Strategy<Value = (Vec<Point<Q>>, Vec<Inequality<Q>>)> {
    (2usize..=3).prop_flat_map(|d| {
        let pts = prop::collection::vec(ints(d, -6, 6).prop_map(Point::new), 1..12);
        let hs = prop::collection::vec(
            (ints(d, -3, 3), -2i64..=8).prop_map(|(a, b)| Inequality::new(a, Q::from_integer(b.into()))),
            1..10,
        );
        (pts, hs)
    })
}

fn decision<S: acit_core::Scalar>(c: &Certificate<S>) -> Decision {
    if c.intersects() {
        Decision::Intersect
    } else {
        Decision::Disjoint
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn exact_solve_matches_oracle((points, halfspaces) in instance(), seed in 0u64..1000) {
        let d = points[0].dim();
        let params = AcitParams::for_dimension(d, seed).with_alpha_constant(d, 0.0).with_sample_rule(SampleRule::Sqrt { factor: 1.0 }).with_invariant_checks(true);
        let sol = solve(&points, &halfspaces, &params).unwrap();
        let expected = oracle_decide(&points, &halfspaces).unwrap();
        prop_assert_eq!(decision(&sol.certificate), expected);
        let report = check_certificate(&points, &halfspaces, &sol.certificate);
        prop_assert!(report.valid, "{:?}", report.failures);
        if let Certificate::Separator { pair, .. } = &sol.certificate {
            prop_assert_eq!(&oracle_closest(&points, &halfspaces).unwrap().dist2, &pair.dist2);
        }
    }

    #[test]
    fn float_solve_matches_oracle((points, halfspaces) in instance()) {
        let d = points[0].dim();
        let fp: Vec<Point<Float>> = points.iter().map(|p| p.convert()).collect();
        let fh: Vec<Inequality<Float>> = halfspaces.iter().map(|h| h.convert()).collect();
        let params = AcitParams::for_dimension(d, 3).with_alpha_constant(d, 0.0).with_sample_rule(SampleRule::Sqrt { factor: 1.0 });
        let sol = solve(&fp, &fh, &params).unwrap();
        let expected = oracle_decide(&points, &halfspaces).unwrap();
        prop_assert_eq!(decision(&sol.certificate), expected);
        prop_assert!(check_certificate(&fp, &fh, &sol.certificate).valid);
    }
}

#[test]
fn recursion_on_larger_instance() {
    // Points on a parabola right of the square, halfspaces tangent to a circle.
    let points: Vec<Point<Q>> = (-30..30).map(|i| Point::from_i64s(&[40 + i * i / 10, i])).collect();
    let halfspaces: Vec<Inequality<Q>> = (0..48)
        .map(|k| {
            let t = Q::new((k - 24).into(), 7.into());
            let den = t.clone() * &t + Q::from_integer(1.into());
            let a = vec![(Q::from_integer(1.into()) - t.clone() * &t) / &den, Q::from_integer(2.into()) * t / den];
            // 16/3 keeps every integer point off the boundaries.
            Inequality::new(a, Q::new(16.into(), 3.into()))
        })
        .collect();
    let params = AcitParams::for_dimension(2, 1).with_alpha_constant(2, 0.0).with_sample_rule(SampleRule::Sqrt { factor: 1.0 }).with_invariant_checks(true);
    let sol = solve(&points, &halfspaces, &params).unwrap();
    assert!(sol.stats.recursive_calls > 1, "{:?}", sol.stats);
    assert!(!sol.certificate.intersects());
    assert!(check_certificate(&points, &halfspaces, &sol.certificate).valid);
    let pair = oracle_closest(&points, &halfspaces).unwrap();
    match sol.certificate {
        Certificate::Separator { pair: got, .. } => assert_eq!(got.dist2, pair.dist2),
        other => panic!("unexpected {other:?}"),
    }
}
