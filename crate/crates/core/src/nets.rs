//! Random ε-nets, origin augmentation and conflict sets.

use std::cmp::Ordering;

use num::ToPrimitive;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{dot, sub, Halfspace, Point};
use crate::scalar::{Rational, Scalar};
use crate::smalllp::{caratheodory_basis, point_in_hull, supporting_direction};

/// Constant in front of the sample-size bound.
pub const NET_CONSTANT: u64 = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct NetParams {
    pub eps: Rational,
    pub sample_size: usize,
    pub seed: u64,
    pub fail_prob: Rational,
}

impl NetParams {
    /// `eps = 1/d^4`, `fail_prob = 1/16` and
    /// `sample_size = ceil(8 d^4 (4 ln d + ln(1/fail_prob) + 1))`.
    pub fn for_dimension(d: usize, seed: u64) -> Self {
        let d4 = (d as i64).pow(4);
        let fail_prob = Rational::new(1.into(), 16.into());
        let size = theoretical_sample_size(d, 1.0 / 16.0);
        NetParams { eps: Rational::new(1.into(), d4.into()), sample_size: size, seed, fail_prob }
    }

    pub fn with_sample_size(mut self, sample_size: usize) -> Self {
        self.sample_size = sample_size;
        self
    }
}

pub fn theoretical_sample_size(d: usize, fail_prob: f64) -> usize {
    let d = d as f64;
    let inv_eps = d.powi(4);
    (NET_CONSTANT as f64 * inv_eps * (4.0 * d.ln() + (1.0 / fail_prob).ln() + 1.0)).ceil() as usize
}

/// Uniform sample without replacement; indices returned in increasing order.
pub fn sample_net<T>(items: &[T], params: &NetParams) -> Vec<usize> {
    let n = items.len();
    if params.sample_size >= n {
        return (0..n).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut idx = sample(&mut rng, n, params.sample_size).into_vec();
    idx.sort_unstable();
    idx
}

/// Checks that every halfspace avoiding `net` holds fewer than `eps |P|` points.
///
/// Ranges are enumerated through hyperplanes spanned by `d` points of `P`:
/// an open side free of the net plus every boundary point outside the net.
/// With `eps >= 1` the check accepts unconditionally.
pub fn verify_net<S: Scalar>(points: &[Point<S>], net: &[usize], eps: &Rational) -> Result<bool> {
    if eps >= &Rational::from_integer(1.into()) {
        return Ok(true);
    }
    let Some(first) = points.first() else { return Ok(true) };
    let d = first.dim();
    if points.len() > 10_000 {
        return Err(Error::ScaleExceeded { what: "net verification point count".into(), limit: 10_000 });
    }
    if d > 4 {
        return Err(Error::ScaleExceeded { what: "net verification dimension".into(), limit: 4 });
    }
    let n = points.len();
    let mut in_net = vec![false; n];
    for &i in net {
        in_net[i] = true;
    }
    if in_net.iter().all(|&b| b) {
        return Ok(true);
    }
    let limit = |count: usize| -> bool {
        let lhs = Rational::from_integer(count.into());
        lhs < eps.clone() * Rational::from_integer(n.into())
    };
    if n < d {
        // No spanning hyperplanes; a halfspace can hold every point.
        return Ok(!net.is_empty() || limit(n));
    }
    let coords: Vec<Vec<S>> = points.iter().map(|p| p.coords().to_vec()).collect();
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        if let Some((normal, offset)) = spanned_hyperplane(&coords, &idx) {
            for dir in [Ordering::Greater, Ordering::Less] {
                let mut count = 0usize;
                let mut hit = false;
                for (i, p) in coords.iter().enumerate() {
                    let s = (dot(&normal, p) - &offset).sign();
                    if s == dir {
                        if in_net[i] {
                            hit = true;
                            break;
                        }
                        count += 1;
                    } else if s == Ordering::Equal && !in_net[i] {
                        count += 1;
                    }
                }
                if !hit && !limit(count) {
                    return Ok(false);
                }
            }
        }
        let mut i = d;
        while i > 0 && idx[i - 1] == n - d + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..d {
            idx[j] = idx[j - 1] + 1;
        }
    }
    Ok(true)
}

fn spanned_hyperplane<S: Scalar>(pts: &[Vec<S>], idx: &[usize]) -> Option<(Vec<S>, S)> {
    let d = pts[0].len();
    let base = &pts[idx[0]];
    let rows: Vec<Vec<S>> = idx[1..].iter().map(|&i| sub(&pts[i], base)).collect();
    let sol = crate::smalllp::linalg::solve_affine(&rows, &vec![S::zero(); d - 1], d)?;
    if sol.null_basis.len() != 1 {
        return None;
    }
    let normal = sol.null_basis.into_iter().next().unwrap();
    let offset = dot(&normal, base);
    Some((normal, offset))
}

/// Adds a Carathéodory basis of the origin when the origin lies in `conv(P)`.
pub fn augment_for_origin<S: Scalar>(points: &[Point<S>], net: &[usize]) -> Vec<usize> {
    let mut out = net.to_vec();
    let Some(first) = points.first() else { return out };
    let origin = vec![S::zero(); first.dim()];
    if let Ok(basis) = caratheodory_basis(&origin, points) {
        out.extend(basis.into_iter().map(|(i, _)| i));
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Grows `net` until the origin is interior to its hull, provided it is
/// interior to `conv(P)`; each step adds the point of `P` extreme along a
/// supporting direction of the current hull at the origin.
pub fn augment_for_interior<S: Scalar>(points: &[Point<S>], net: &[usize]) -> Vec<usize> {
    let mut out = augment_for_origin(points, net);
    let Some(first) = points.first() else { return out };
    let origin = vec![S::zero(); first.dim()];
    for _ in 0..4 * first.dim() + 4 {
        let sub: Vec<Point<S>> = out.iter().map(|&i| points[i].clone()).collect();
        let Some(z) = supporting_direction(&origin, &sub) else { break };
        let best = (0..points.len()).max_by(|&a, &b| points[a].dot(&z).cmp_s(&points[b].dot(&z)));
        match best {
            Some(i) if points[i].dot(&z).is_positive() && !out.contains(&i) => {
                out.push(i);
                out.sort_unstable();
            }
            _ => break,
        }
    }
    out
}

/// Whether the origin is interior to the hull of the selected points.
pub fn origin_interior<S: Scalar>(points: &[Point<S>], net: &[usize]) -> bool {
    let Some(first) = points.first() else { return false };
    let sub: Vec<Point<S>> = net.iter().map(|&i| points[i].clone()).collect();
    point_in_hull(&vec![S::zero(); first.dim()], &sub, true).inside
}

#[derive(Clone, Debug, PartialEq)]
pub enum Generator<S> {
    Halfspace(Halfspace<S>),
    Point(Point<S>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConflictSet<S> {
    pub members: Vec<usize>,
    pub generator: Generator<S>,
}

impl<S> ConflictSet<S> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `P ∩ h` with closed membership.
pub fn conflict_points<S: Scalar>(points: &[Point<S>], h: &Halfspace<S>) -> ConflictSet<S> {
    let members = points.iter().enumerate().filter(|(_, p)| h.contains(p)).map(|(i, _)| i).collect();
    ConflictSet { members, generator: Generator::Halfspace(h.clone()) }
}

/// Halfspaces of `H` that do not contain `x`.
pub fn conflict_halfspaces<S: Scalar>(halfspaces: &[Halfspace<S>], x: &Point<S>) -> ConflictSet<S> {
    let members = halfspaces.iter().enumerate().filter(|(_, h)| !h.contains(x)).map(|(i, _)| i).collect();
    ConflictSet { members, generator: Generator::Point(x.clone()) }
}

/// Size of `eps * n` as a float, for reporting.
pub fn eps_bound(eps: &Rational, n: usize) -> f64 {
    ToPrimitive::to_f64(&(eps * Rational::from_integer(n.into()))).unwrap_or(f64::INFINITY)
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

    fn octagon() -> Vec<Point<Q>> {
        pts(&[&[2, 1], &[1, 2], &[-1, 2], &[-2, 1], &[-2, -1], &[-1, -2], &[1, -2], &[2, -1]])
    }

    #[test]
    fn sample_size_formula() {
        let p = NetParams::for_dimension(2, 0);
        assert_eq!(p.eps, q("1/16"));
        // 8 * 16 * (4 ln 2 + ln 16 + 1) = 128 * 6.5452... = 837.8
        assert_eq!(p.sample_size, 838);
        assert_eq!(NetParams::for_dimension(3, 0).sample_size, theoretical_sample_size(3, 1.0 / 16.0));
    }

    #[test]
    fn small_sets_are_their_own_net() {
        let p = octagon();
        let params = NetParams::for_dimension(2, 1);
        assert_eq!(sample_net(&p, &params), (0..8).collect::<Vec<_>>());
        let params = params.with_sample_size(3);
        let a = sample_net(&p, &params);
        assert_eq!(a.len(), 3);
        assert_eq!(a, sample_net(&p, &params));
    }

    #[test]
    fn octagon_alternating_net() {
        let p = octagon();
        assert!(verify_net(&p, &[0, 2, 4, 6], &q("1/2")).unwrap());
        assert!(verify_net(&p, &(0..8).collect::<Vec<_>>(), &q("1/100")).unwrap());
        // Two adjacent vertices leave half the octagon uncovered.
        assert!(!verify_net(&p, &[0, 1], &q("1/2")).unwrap());
        assert!(verify_net(&p, &[], &q("1")).unwrap());
    }

    #[test]
    fn augmentation() {
        let far = pts(&[&[2, 0], &[3, 1], &[3, -1]]);
        assert_eq!(augment_for_origin(&far, &[1]), vec![1]);

        let diamond = pts(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        let n = augment_for_origin(&diamond, &[0]);
        assert!(n.contains(&0));
        let sub: Vec<Point<Q>> = n.iter().map(|&i| diamond[i].clone()).collect();
        assert!(point_in_hull(&[q("0"), q("0")], &sub, false).inside);

        let n = augment_for_interior(&diamond, &[0]);
        assert!(origin_interior(&diamond, &n));
    }

    #[test]
    fn conflicts() {
        let p = pts(&[&[0, 0], &[2, 0]]);
        let h = Halfspace::far_side(Point::from_i64s(&[1, 0])).unwrap();
        assert_eq!(conflict_points(&p, &h).members, vec![1]);
        let all = Halfspace::origin_side(Point::from_i64s(&[0, 1])).unwrap();
        assert_eq!(conflict_points(&p, &all).members, vec![0, 1]);
        let none = Halfspace::far_side(Point::new(vec![q("0"), q("1/100")])).unwrap();
        assert!(conflict_points(&p, &none).is_empty());

        let square: Vec<Halfspace<Q>> = [[1, 0], [-1, 0], [0, 1], [0, -1]]
            .iter()
            .map(|z| Halfspace::origin_side(Point::from_i64s(z)).unwrap())
            .collect();
        assert!(conflict_halfspaces(&square, &Point::origin(2)).is_empty());
        assert_eq!(conflict_halfspaces(&square, &Point::from_i64s(&[2, 0])).members, vec![0]);
        assert!(conflict_halfspaces(&square, &Point::new(vec![q("1/2"), q("-1/3")])).is_empty());
    }
}
