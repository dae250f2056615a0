//! Points, hyperplanes in the normalized `<z, x> = 1` form, halfspaces, and
//! the elementary predicates over them.

use std::cmp::Ordering;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Point<S>(Vec<S>);

impl<S: Scalar> Point<S> {
    pub fn new(coords: Vec<S>) -> Self {
        Point(coords)
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![S::zero(); dim])
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| S::from_i64(c)).collect())
    }

    pub fn from_f64s(coords: &[f64]) -> Self {
        Point(coords.iter().map(|&c| S::from_f64(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<S> {
        self.0
    }

    /// Exact zero test (toleranced in float mode).
    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn dot(&self, other: &[S]) -> S {
        dot(&self.0, other)
    }

    pub fn sub(&self, other: &[S]) -> Point<S> {
        Point(sub(&self.0, other))
    }

    pub fn add(&self, other: &[S]) -> Point<S> {
        Point(add(&self.0, other))
    }

    pub fn scale(&self, factor: &S) -> Point<S> {
        Point(scale(&self.0, factor))
    }

    pub fn norm2(&self) -> S {
        dot(&self.0, &self.0)
    }

    pub fn dist2(&self, other: &[S]) -> S {
        norm2(&sub(&self.0, other))
    }

    pub fn midpoint(&self, other: &[S]) -> Point<S> {
        Point(add(&self.0, other).into_iter().map(|c| c.half()).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Scalar::to_f64).collect()
    }

    pub fn convert<T: Scalar>(&self) -> Point<T> {
        Point(self.0.iter().map(|c| T::from_ratio(&c.to_ratio())).collect())
    }
}

impl<S> Deref for Point<S> {
    type Target = [S];

    fn deref(&self) -> &[S] {
        &self.0
    }
}

impl<S> From<Vec<S>> for Point<S> {
    fn from(v: Vec<S>) -> Self {
        Point(v)
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc + x.clone() * y;
    }
    acc
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y).collect()
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y).collect()
}

pub fn scale<S: Scalar>(a: &[S], factor: &S) -> Vec<S> {
    a.iter().map(|x| x.clone() * factor).collect()
}

pub fn norm2<S: Scalar>(a: &[S]) -> S {
    dot(a, a)
}

/// `a + t * (b - a)`.
pub fn lerp<S: Scalar>(a: &[S], b: &[S], t: &S) -> Vec<S> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + (y.clone() - x) * t)
        .collect()
}

/// The hyperplane `{x : <z, x> = 1}`; never passes through the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane<S> {
    z: Point<S>,
}

impl<S: Scalar> Hyperplane<S> {
    pub fn new(z: Point<S>) -> Result<Self> {
        if z.iter().all(|c| c.is_exact_zero()) {
            return Err(Error::ZeroNormal);
        }
        Ok(Hyperplane { z })
    }

    /// The plane `<a, x> = b`, provided `b != 0`.
    pub fn from_affine(a: &[S], b: &S) -> Result<Self> {
        if b.is_exact_zero() {
            return Err(Error::Precondition("hyperplane passes through the origin".into()));
        }
        Hyperplane::new(Point(a.iter().map(|c| c.clone() / b).collect()))
    }

    pub fn normal(&self) -> &Point<S> {
        &self.z
    }

    pub fn dim(&self) -> usize {
        self.z.dim()
    }

    /// `<z, p> - 1`: positive on the far side, negative on the origin side.
    pub fn eval(&self, p: &[S]) -> S {
        self.z.dot(p) - S::one()
    }
}

/// Which of the two closed halfspaces bounded by a hyperplane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// `{x : <z, x> <= 1}`, contains the origin.
    OriginSide,
    /// `{x : <z, x> >= 1}`, excludes the origin.
    FarSide,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::OriginSide => Side::FarSide,
            Side::FarSide => Side::OriginSide,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace<S> {
    pub plane: Hyperplane<S>,
    pub side: Side,
}

impl<S: Scalar> Halfspace<S> {
    pub fn new(plane: Hyperplane<S>, side: Side) -> Self {
        Halfspace { plane, side }
    }

    pub fn origin_side(z: Point<S>) -> Result<Self> {
        Ok(Halfspace::new(Hyperplane::new(z)?, Side::OriginSide))
    }

    pub fn far_side(z: Point<S>) -> Result<Self> {
        Ok(Halfspace::new(Hyperplane::new(z)?, Side::FarSide))
    }

    pub fn dim(&self) -> usize {
        self.plane.dim()
    }

    pub fn normal(&self) -> &Point<S> {
        self.plane.normal()
    }

    pub fn contains_origin(&self) -> bool {
        self.side == Side::OriginSide
    }

    /// Signed violation: `<= 0` inside, `> 0` outside.
    pub fn violation(&self, p: &[S]) -> S {
        let e = self.plane.eval(p);
        match self.side {
            Side::OriginSide => e,
            Side::FarSide => -e,
        }
    }

    /// Position of `p` relative to this closed halfspace.
    pub fn locate(&self, p: &[S]) -> Location {
        match self.violation(p).sign() {
            Ordering::Less => Location::Inside,
            Ordering::Equal => Location::Boundary,
            Ordering::Greater => Location::Outside,
        }
    }

    pub fn contains(&self, p: &[S]) -> bool {
        !self.violation(p).is_positive()
    }

    pub fn flipped(&self) -> Self {
        Halfspace::new(self.plane.clone(), self.side.flip())
    }

    pub fn to_inequality(&self) -> Inequality<S> {
        let z = self.normal().coords();
        match self.side {
            Side::OriginSide => Inequality::new(z.to_vec(), S::one()),
            Side::FarSide => Inequality::new(z.iter().map(|c| -c.clone()).collect(), -S::one()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// General closed halfspace `<a, x> <= b`, used by the LP and QP solvers.
#[derive(Clone, Debug, PartialEq)]
pub struct Inequality<S> {
    pub a: Vec<S>,
    pub b: S,
}

impl<S: Scalar> Inequality<S> {
    pub fn new(a: Vec<S>, b: S) -> Self {
        Inequality { a, b }
    }

    /// `<a, x> >= b`, stored as `<-a, x> <= -b`.
    pub fn geq(a: Vec<S>, b: S) -> Self {
        Inequality { a: a.into_iter().map(|c| -c).collect(), b: -b }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// `b - <a, x>`; non-negative when satisfied.
    pub fn slack(&self, x: &[S]) -> S {
        self.b.clone() - dot(&self.a, x)
    }

    pub fn contains(&self, x: &[S]) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn strictly_contains(&self, x: &[S]) -> bool {
        self.slack(x).is_positive()
    }

    pub fn is_trivial(&self) -> bool {
        self.a.iter().all(|c| c.is_exact_zero())
    }

    /// Normalized form relative to the origin; requires `b != 0`.
    pub fn to_halfspace(&self) -> Result<Halfspace<S>> {
        if self.is_trivial() {
            return Err(Error::ZeroNormal);
        }
        match self.b.sign() {
            Ordering::Greater => Ok(Halfspace::new(
                Hyperplane::from_affine(&self.a, &self.b)?,
                Side::OriginSide,
            )),
            Ordering::Less => Ok(Halfspace::new(
                Hyperplane::from_affine(&self.a, &self.b)?,
                Side::FarSide,
            )),
            Ordering::Equal => Err(Error::OriginOnBoundary),
        }
    }

    pub fn translated(&self, shift: &[S]) -> Inequality<S> {
        // <a, x + shift> <= b  <=>  <a, x> <= b - <a, shift>
        Inequality::new(self.a.clone(), self.b.clone() - dot(&self.a, shift))
    }

    pub fn convert<T: Scalar>(&self) -> Inequality<T> {
        Inequality::new(
            self.a.iter().map(|c| T::from_ratio(&c.to_ratio())).collect(),
            T::from_ratio(&self.b.to_ratio()),
        )
    }
}

/// Cached classification of a point or halfspace set with respect to the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SetClass {
    Embracing,
    Avoiding,
    Unclassified,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VPolytope<S> {
    pub points: Vec<Point<S>>,
    pub class: SetClass,
}

impl<S: Scalar> VPolytope<S> {
    pub fn new(points: Vec<Point<S>>) -> Self {
        VPolytope { points, class: SetClass::Unclassified }
    }

    pub fn with_class(points: Vec<Point<S>>, class: SetClass) -> Self {
        VPolytope { points, class }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.points.first().map(Point::dim)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HPolytope<S> {
    pub halfspaces: Vec<Halfspace<S>>,
    pub class: SetClass,
}

impl<S: Scalar> HPolytope<S> {
    pub fn new(halfspaces: Vec<Halfspace<S>>) -> Self {
        HPolytope { halfspaces, class: SetClass::Unclassified }
    }

    pub fn with_class(halfspaces: Vec<Halfspace<S>>, class: SetClass) -> Self {
        HPolytope { halfspaces, class }
    }

    pub fn len(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halfspaces.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.halfspaces.first().map(Halfspace::dim)
    }

    pub fn contains(&self, p: &[S]) -> bool {
        self.halfspaces.iter().all(|h| h.contains(p))
    }

    pub fn inequalities(&self) -> Vec<Inequality<S>> {
        self.halfspaces.iter().map(Halfspace::to_inequality).collect()
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub fn halfspace_contains<S: Scalar>(h: &Halfspace<S>, p: &Point<S>) -> Result<bool> {
    check_dim(h.dim(), p.dim())?;
    Ok(h.contains(p))
}

/// Squared Euclidean distance `(<z,p> - 1)^2 / |z|^2`; exact in rational mode.
pub fn point_hyperplane_distance2<S: Scalar>(h: &Hyperplane<S>, p: &Point<S>) -> Result<S> {
    check_dim(h.dim(), p.dim())?;
    let z2 = h.normal().norm2();
    if z2.is_exact_zero() {
        return Err(Error::ZeroNormal);
    }
    let e = h.eval(p);
    Ok(e.clone() * &e / z2)
}

pub fn point_hyperplane_distance<S: Scalar>(h: &Hyperplane<S>, p: &Point<S>) -> Result<f64> {
    Ok(point_hyperplane_distance2(h, p)?.to_f64().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Float, Rational};
    use proptest::prelude::*;

    type Q = Rational;

    fn q(s: &str) -> Q {
        parse_rational(s).unwrap()
    }

    fn x1_le_1() -> Halfspace<Q> {
        Halfspace::origin_side(Point::from_i64s(&[1, 0])).unwrap()
    }

    #[test]
    fn contains_examples() {
        let h = x1_le_1();
        assert!(halfspace_contains(&h, &Point::from_i64s(&[0, 0])).unwrap());
        assert!(!halfspace_contains(&h.flipped(), &Point::from_i64s(&[0, 0])).unwrap());
        assert!(halfspace_contains(&h, &Point::from_i64s(&[1, 5])).unwrap());
        assert!(halfspace_contains(&h.flipped(), &Point::from_i64s(&[1, 5])).unwrap());
        assert_eq!(
            halfspace_contains(&h, &Point::from_i64s(&[1, 5, 2])),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn distance_examples() {
        let h = Hyperplane::new(Point::<Q>::from_i64s(&[1, 0])).unwrap();
        assert_eq!(point_hyperplane_distance2(&h, &Point::from_i64s(&[3, 0])).unwrap(), q("4"));
        assert_eq!(point_hyperplane_distance(&h, &Point::from_i64s(&[3, 0])).unwrap(), 2.0);
        assert_eq!(point_hyperplane_distance2(&h, &Point::from_i64s(&[1, 7])).unwrap(), q("0"));
        let diag = Hyperplane::new(Point::<Q>::from_i64s(&[1, 1])).unwrap();
        // Projection of the origin onto x1 + x2 = 1 is (1/2, 1/2): squared distance 1/2.
        assert_eq!(point_hyperplane_distance2(&diag, &Point::origin(2)).unwrap(), q("1/2"));
        let d = point_hyperplane_distance(&diag, &Point::origin(2)).unwrap();
        assert!((d - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn zero_normal_rejected() {
        assert_eq!(Hyperplane::new(Point::<Q>::origin(3)), Err(Error::ZeroNormal));
        assert!(Hyperplane::<Q>::from_affine(&[q("1"), q("0")], &q("0")).is_err());
    }

    #[test]
    fn inequality_round_trip_through_halfspace() {
        let ineq = Inequality::new(vec![q("2"), q("-1")], q("4"));
        let h = ineq.to_halfspace().unwrap();
        assert_eq!(h.side, Side::OriginSide);
        assert_eq!(h.normal().coords(), &[q("1/2"), q("-1/4")]);
        let far = Inequality::geq(vec![q("1"), q("0")], q("2")).to_halfspace().unwrap();
        assert_eq!(far.side, Side::FarSide);
        assert!(!far.contains(&[q("0"), q("0")]));
        assert!(far.contains(&[q("3"), q("0")]));
    }

    fn small() -> impl Strategy<Value = i64> {
        -20i64..=20
    }

    proptest! {
        #[test]
        fn trichotomy_and_flip(z in prop::collection::vec(small(), 3), p in prop::collection::vec(small(), 3)) {
            prop_assume!(z.iter().any(|&c| c != 0));
            let h = Halfspace::origin_side(Point::<Q>::from_i64s(&z)).unwrap();
            let p = Point::<Q>::from_i64s(&p);
            let loc = h.locate(&p);
            let flipped = h.flipped().locate(&p);
            match loc {
                Location::Boundary => prop_assert_eq!(flipped, Location::Boundary),
                Location::Inside => prop_assert_eq!(flipped, Location::Outside),
                Location::Outside => prop_assert_eq!(flipped, Location::Inside),
            }
            prop_assert_eq!(h.contains(&p), loc != Location::Outside);
        }

        #[test]
        fn float_agrees_with_exact_away_from_boundary(z in prop::collection::vec(small(), 3), p in prop::collection::vec(small(), 3)) {
            prop_assume!(z.iter().any(|&c| c != 0));
            let hq = Halfspace::origin_side(Point::<Q>::from_i64s(&z)).unwrap();
            let pq = Point::<Q>::from_i64s(&p);
            let margin = hq.violation(&pq).to_f64().abs();
            prop_assume!(margin > 10.0 * crate::scalar::tolerance());
            let hf = Halfspace::origin_side(Point::<Float>::from_i64s(&z)).unwrap();
            let pf = Point::<Float>::from_i64s(&p);
            prop_assert_eq!(hq.contains(&pq), hf.contains(&pf));
        }
    }
}
