//! Polar transform of points, hyperplanes and sets, with validity classes.

use crate::error::{Error, Result};
use crate::geometry::{HPolytope, Halfspace, Hyperplane, Point, SetClass, Side, VPolytope};
use crate::scalar::Scalar;
use crate::smalllp::{infeasibility_certificate, point_in_hull};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Validity {
    Embracing,
    Avoiding,
    InvalidBoundary,
    InvalidEmpty,
}

impl Validity {
    pub fn is_valid(self) -> bool {
        matches!(self, Validity::Embracing | Validity::Avoiding)
    }

    pub fn as_class(self) -> SetClass {
        match self {
            Validity::Embracing => SetClass::Embracing,
            Validity::Avoiding => SetClass::Avoiding,
            _ => SetClass::Unclassified,
        }
    }
}

/// The hyperplane `{x : <p, x> = 1}`.
pub fn polar_point<S: Scalar>(p: &Point<S>) -> Result<Hyperplane<S>> {
    if p.iter().all(|c| c.is_exact_zero()) {
        return Err(Error::OriginHasNoPolar);
    }
    Hyperplane::new(p.clone())
}

/// The normal `z` of `{x : <z, x> = 1}`.
pub fn polar_hyperplane<S: Scalar>(h: &Hyperplane<S>) -> Point<S> {
    h.normal().clone()
}

pub fn classify_point_set<S: Scalar>(points: &[Point<S>]) -> Result<Validity> {
    let d = points.first().ok_or(Error::EmptyPointSet)?.dim();
    for p in points {
        crate::geometry::check_dim(d, p.dim())?;
    }
    let origin = vec![S::zero(); d];
    let t = point_in_hull(&origin, points, true);
    Ok(match (t.coefficients.is_some(), t.inside) {
        (false, _) => Validity::Avoiding,
        (true, true) => Validity::Embracing,
        (true, false) => Validity::InvalidBoundary,
    })
}

/// Classifies by orientation tags; far-side sets must also have a common point.
pub fn classify_halfspace_set<S: Scalar>(halfspaces: &[Halfspace<S>]) -> Result<Validity> {
    let first = halfspaces.first().ok_or_else(|| Error::InvalidInput("empty halfspace set".into()))?;
    let d = first.dim();
    for h in halfspaces {
        crate::geometry::check_dim(d, h.dim())?;
    }
    let side = first.side;
    if halfspaces.iter().any(|h| h.side != side) {
        return Err(Error::MixedOrientation);
    }
    Ok(match side {
        Side::OriginSide => Validity::Embracing,
        Side::FarSide => {
            let ineqs: Vec<_> = halfspaces.iter().map(Halfspace::to_inequality).collect();
            if infeasibility_certificate(&ineqs).is_some() {
                Validity::InvalidEmpty
            } else {
                Validity::Avoiding
            }
        }
    })
}

/// Points `z` of the boundary hyperplanes, carrying the validity of `H`.
pub fn polarize_halfspaces<S: Scalar>(h: &HPolytope<S>) -> Result<VPolytope<S>> {
    let v = classify_halfspace_set(&h.halfspaces)?;
    if !v.is_valid() {
        return Err(Error::EmptyIntersection);
    }
    let points = h.halfspaces.iter().map(|hs| polar_hyperplane(&hs.plane)).collect();
    Ok(VPolytope::with_class(points, v.as_class()))
}

/// Origin-side polars for an embracing set, far-side polars for an avoiding one.
pub fn polarize_points<S: Scalar>(p: &VPolytope<S>) -> Result<HPolytope<S>> {
    let v = classify_point_set(&p.points)?;
    let side = match v {
        Validity::Embracing => Side::OriginSide,
        Validity::Avoiding => Side::FarSide,
        _ => return Err(Error::OriginOnBoundary),
    };
    let halfspaces = p
        .points
        .iter()
        .map(|q| Ok(Halfspace::new(polar_point(q)?, side)))
        .collect::<Result<Vec<_>>>()?;
    Ok(HPolytope::with_class(halfspaces, v.as_class()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Rational};

    type Q = Rational;

    fn q(s: &str) -> Q {
        parse_rational(s).unwrap()
    }

    fn pts(v: &[&[i64]]) -> Vec<Point<Q>> {
        v.iter().map(|c| Point::from_i64s(c)).collect()
    }

    fn square_h() -> HPolytope<Q> {
        HPolytope::new(
            [[1, 0], [-1, 0], [0, 1], [0, -1]]
                .iter()
                .map(|z| Halfspace::origin_side(Point::from_i64s(z)).unwrap())
                .collect(),
        )
    }

    #[test]
    fn polar_point_examples() {
        let h = polar_point(&Point::<Q>::from_i64s(&[2, 0])).unwrap();
        assert!(h.eval(&[q("1/2"), q("7")]).is_zero());
        let h = polar_point(&Point::<Q>::from_i64s(&[1, 1])).unwrap();
        assert!(h.eval(&[q("1/3"), q("2/3")]).is_zero());
        assert_eq!(polar_point(&Point::<Q>::origin(2)), Err(Error::OriginHasNoPolar));
    }

    #[test]
    fn polar_hyperplane_examples() {
        let h = Hyperplane::from_affine(&[q("1"), q("0")], &q("1/2")).unwrap();
        assert_eq!(polar_hyperplane(&h), Point::from_i64s(&[2, 0]));
        let h = Hyperplane::from_affine(&[q("0"), q("1")], &q("1")).unwrap();
        assert_eq!(polar_hyperplane(&h), Point::from_i64s(&[0, 1]));
        let p = Point::<Q>::from_i64s(&[3, -4]);
        assert_eq!(polar_hyperplane(&polar_point(&p).unwrap()), p);
    }

    #[test]
    fn point_set_classes() {
        assert_eq!(classify_point_set(&pts(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]])).unwrap(), Validity::Embracing);
        assert_eq!(classify_point_set(&pts(&[&[2, 0], &[3, 1], &[3, -1]])).unwrap(), Validity::Avoiding);
        assert_eq!(classify_point_set(&pts(&[&[1, 0], &[-1, 0], &[0, 1]])).unwrap(), Validity::InvalidBoundary);
    }

    #[test]
    fn halfspace_set_classes() {
        assert_eq!(classify_halfspace_set(&square_h().halfspaces).unwrap(), Validity::Embracing);
        let far = vec![
            Halfspace::far_side(Point::<Q>::from_i64s(&[1, 0])).unwrap(),
            Halfspace::far_side(Point::from_i64s(&[0, 1])).unwrap(),
        ];
        assert_eq!(classify_halfspace_set(&far).unwrap(), Validity::Avoiding);
        let mixed = vec![
            Halfspace::origin_side(Point::<Q>::from_i64s(&[1, 0])).unwrap(),
            Halfspace::far_side(Point::from_i64s(&[0, 1])).unwrap(),
        ];
        assert_eq!(classify_halfspace_set(&mixed), Err(Error::MixedOrientation));
        // x1 >= 1 and x1 <= -1 as far-side halfspaces: empty.
        let empty = vec![
            Halfspace::far_side(Point::<Q>::from_i64s(&[1, 0])).unwrap(),
            Halfspace::far_side(Point::from_i64s(&[-1, 0])).unwrap(),
        ];
        assert_eq!(classify_halfspace_set(&empty).unwrap(), Validity::InvalidEmpty);
    }

    #[test]
    fn polarize_examples() {
        let v = polarize_halfspaces(&square_h()).unwrap();
        assert_eq!(v.points, pts(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]));
        assert_eq!(v.class, SetClass::Embracing);

        let h = HPolytope::new(vec![Halfspace::far_side(Point::new(vec![q("1/2"), q("0")])).unwrap()]);
        let v = polarize_halfspaces(&h).unwrap();
        assert_eq!(v.points, vec![Point::new(vec![q("1/2"), q("0")])]);
        assert_eq!(v.class, SetClass::Avoiding);

        let back = polarize_points(&VPolytope::new(pts(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]))).unwrap();
        assert_eq!(back.halfspaces, square_h().halfspaces);
        assert_eq!(back.class, SetClass::Embracing);

        let single = polarize_points(&VPolytope::new(vec![Point::new(vec![q("1/2"), q("0")])])).unwrap();
        assert_eq!(single.halfspaces[0].side, Side::FarSide);
        assert!(single.halfspaces[0].contains(&[q("2"), q("5")]));
        assert!(!single.halfspaces[0].contains(&[q("1"), q("5")]));
        assert_eq!(single.class, SetClass::Avoiding);

        assert_eq!(
            polarize_points(&VPolytope::new(pts(&[&[1, 0], &[-1, 0], &[0, 1]]))),
            Err(Error::OriginOnBoundary)
        );
    }
}
