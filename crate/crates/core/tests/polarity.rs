use acit_core::geometry::{Halfspace, Location, Point, Side, VPolytope, HPolytope};
use acit_core::polarity::{classify_halfspace_set, classify_point_set, polar_point, polarize_halfspaces, polarize_points};
use acit_core::{Rational, Scalar, Validity};
use proptest::prelude::*;

type Q = Rational;

fn coord() -> impl Strategy<Value = Q> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

fn point(d: usize) -> impl Strategy<Value = Point<Q>> {
    prop::collection::vec(coord(), d).prop_map(Point::new)
}

fn nonzero_point(d: usize) -> impl Strategy<Value = Point<Q>> {
    point(d).prop_filter("nonzero", |p| !p.is_origin())
}

fn point_set() -> impl Strategy<Value = Vec<Point<Q>>> {
    (2usize..=4).prop_flat_map(|d| prop::collection::vec(nonzero_point(d), 1..8))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn incidence_triple(p in nonzero_point(3), z in nonzero_point(3)) {
        // p against the halfspaces of z, and z against those of p.
        for side in [Side::OriginSide, Side::FarSide] {
            let h = Halfspace::new(polar_point(&z).unwrap(), side);
            let hp = Halfspace::new(polar_point(&p).unwrap(), side);
            prop_assert_eq!(h.locate(&p), hp.locate(&z));
            prop_assert_eq!(h.contains(&p), hp.contains(&z));
        }
        let strict = Halfspace::origin_side(z.clone()).unwrap().locate(&p) == Location::Inside;
        prop_assert_eq!(strict, p.dot(&z) < Q::one());
    }

    #[test]
    fn polarity_is_involutive(points in point_set()) {
        let class = classify_point_set(&points).unwrap();
        prop_assume!(class.is_valid());
        let h = polarize_points(&VPolytope::new(points.clone())).unwrap();
        let back = polarize_halfspaces(&h).unwrap();
        prop_assert_eq!(&back.points, &points);
        let again = polarize_points(&back).unwrap();
        prop_assert_eq!(again.halfspaces, h.halfspaces);
    }

    #[test]
    fn polarity_preserves_validity(points in point_set()) {
        let class = classify_point_set(&points).unwrap();
        prop_assume!(class.is_valid());
        let h = polarize_points(&VPolytope::new(points)).unwrap();
        prop_assert_eq!(classify_halfspace_set(&h.halfspaces).unwrap(), class);
        let v = polarize_halfspaces(&h).unwrap();
        prop_assert_eq!(classify_point_set(&v.points).unwrap(), class);
    }

    #[test]
    fn origin_side_sets_embrace(normals in (2usize..=4).prop_flat_map(|d| prop::collection::vec(nonzero_point(d), 1..8))) {
        let h = HPolytope::new(normals.iter().map(|z| Halfspace::origin_side(z.clone()).unwrap()).collect());
        prop_assert_eq!(classify_halfspace_set(&h.halfspaces).unwrap(), Validity::Embracing);
        let v = polarize_halfspaces(&h).unwrap();
        prop_assert_eq!(v.points, normals);
    }
}
