//! Closest pair between two halfspace intersections, solved as an LP-type
//! problem over `z = (u, v)` in `R^{2d}`.
//!
//! Constraints are inserted in random order (Welzl style). A basis is a set
//! of constraints held at equality; its optimum comes from two nested
//! equality-constrained least-squares solves: first minimize `|u - v|^2`,
//! then, among the minimizers, take the one of least norm. The second stage
//! makes degenerate optima unique and deterministic.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{dot, sub, Inequality, Point};
use crate::scalar::Scalar;

use super::hull::{convex_coefficients, hull_inequalities};
use super::linalg::{gram, solve_affine, solve_consistent};

/// `x` lies on the first (halfspace) side, `y` on the second.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosestPair<S> {
    pub x: Point<S>,
    pub y: Point<S>,
    pub dist2: S,
}

impl<S: Scalar> ClosestPair<S> {
    pub fn new(x: Point<S>, y: Point<S>) -> Self {
        let dist2 = x.dist2(&y);
        ClosestPair { x, y, dist2 }
    }

    pub fn distance(&self) -> f64 {
        self.dist2.to_f64().sqrt()
    }

    pub fn swapped(&self) -> Self {
        ClosestPair { x: self.y.clone(), y: self.x.clone(), dist2: self.dist2.clone() }
    }

    pub fn is_touching(&self) -> bool {
        self.dist2.is_negligible_sq()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PairOutcome<S> {
    Disjoint(ClosestPair<S>),
    /// The sets meet; the pair has `x = y` (up to tolerance in float mode).
    Intersecting(ClosestPair<S>),
}

impl<S: Scalar> PairOutcome<S> {
    pub fn pair(&self) -> &ClosestPair<S> {
        match self {
            PairOutcome::Disjoint(p) | PairOutcome::Intersecting(p) => p,
        }
    }

    pub fn is_intersecting(&self) -> bool {
        matches!(self, PairOutcome::Intersecting(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Block {
    U,
    V,
}

#[derive(Clone, Debug)]
struct QCon<S> {
    block: Block,
    /// Position in the input list of its block.
    id: usize,
    a: Vec<S>,
    b: S,
}

fn qcons<S: Scalar>(ineqs: &[Inequality<S>], block: Block) -> Vec<QCon<S>> {
    ineqs.iter().enumerate().map(|(id, h)| QCon { block, id, a: h.a.clone(), b: h.b.clone() }).collect()
}

fn outcome_of<S: Scalar>(z: &[S], d: usize) -> PairOutcome<S> {
    let pair = ClosestPair::new(Point::new(z[..d].to_vec()), Point::new(z[d..].to_vec()));
    if pair.is_touching() {
        PairOutcome::Intersecting(pair)
    } else {
        PairOutcome::Disjoint(pair)
    }
}

/// Minimizes `|u - v|^2` over `u` in `∩A`, `v` in `∩B`.
pub fn closest_pair_hh<S: Scalar>(a: &[Inequality<S>], b: &[Inequality<S>], seed: u64) -> Result<PairOutcome<S>> {
    let d = a
        .first()
        .or(b.first())
        .map(|h| h.dim())
        .ok_or_else(|| Error::InvalidInput("closest pair needs at least one constraint".into()))?;
    for h in a.iter().chain(b) {
        crate::geometry::check_dim(d, h.dim())?;
    }
    let mut cons = qcons(a, Block::U);
    cons.extend(qcons(b, Block::V));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    cons.shuffle(&mut rng);

    let mut basis: Vec<&QCon<S>> = Vec::new();
    let mut refs: Vec<&QCon<S>> = cons.iter().collect();
    let end = refs.len();
    let z = welzl(&mut refs, end, &mut basis, d).ok_or(Error::EmptyIntersection)?;
    Ok(outcome_of(&z, d))
}

fn violates<S: Scalar>(c: &QCon<S>, z: &[S], d: usize) -> bool {
    let part = match c.block {
        Block::U => &z[..d],
        Block::V => &z[d..],
    };
    (dot(&c.a, part) - &c.b).is_positive()
}

/// Welzl recursion over `cons[..end]` with move-to-front: a violator is
/// moved ahead of the prefix it was tested against.
fn welzl<'a, S: Scalar>(cons: &mut [&'a QCon<S>], end: usize, basis: &mut Vec<&'a QCon<S>>, d: usize) -> Option<Vec<S>> {
    let mut z = basis_optimum(basis, d)?;
    for i in 0..end {
        if !violates(cons[i], &z, d) {
            continue;
        }
        basis.push(cons[i]);
        let next = welzl(cons, i, basis, d);
        basis.pop();
        z = next?;
        cons[..=i].rotate_right(1);
    }
    Some(z)
}

/// Optimum with every basis constraint tight; `None` if they are inconsistent.
fn basis_optimum<S: Scalar>(basis: &[&QCon<S>], d: usize) -> Option<Vec<S>> {
    let n = 2 * d;
    let rows: Vec<Vec<S>> = basis
        .iter()
        .map(|c| {
            let mut r = vec![S::zero(); n];
            let off = if c.block == Block::U { 0 } else { d };
            for (j, v) in c.a.iter().enumerate() {
                r[off + j] = v.clone();
            }
            r
        })
        .collect();
    let rhs: Vec<S> = basis.iter().map(|c| c.b.clone()).collect();
    let sol = solve_affine(&rows, &rhs, n)?;
    if sol.null_basis.is_empty() {
        return Some(sol.particular);
    }
    let z0 = sol.particular;
    let nb = sol.null_basis;

    // Stage 1: minimize |G t + g| where G maps null coordinates to u - v.
    let diff = |z: &[S]| sub(&z[..d], &z[d..]);
    let g = diff(&z0);
    let gcols: Vec<Vec<S>> = nb.iter().map(|c| diff(c)).collect();
    let gtg = gram(&gcols);
    let rhs1: Vec<S> = gcols.iter().map(|c| -dot(c, &g)).collect();
    let s1 = solve_consistent(&gtg, &rhs1, nb.len());
    let z1 = combine(&z0, &nb, &s1.particular);
    if s1.null_basis.is_empty() {
        return Some(z1);
    }

    // Stage 2: least-norm point among the minimizers.
    let w: Vec<Vec<S>> = s1.null_basis.iter().map(|k| combine(&vec![S::zero(); n], &nb, k)).collect();
    let wtw = gram(&w);
    let rhs2: Vec<S> = w.iter().map(|c| -dot(c, &z1)).collect();
    let s2 = solve_consistent(&wtw, &rhs2, w.len());
    Some(combine(&z1, &w, &s2.particular))
}

fn combine<S: Scalar>(base: &[S], cols: &[Vec<S>], t: &[S]) -> Vec<S> {
    let mut out = base.to_vec();
    for (c, tk) in cols.iter().zip(t) {
        if tk.is_exact_zero() {
            continue;
        }
        for (o, v) in out.iter_mut().zip(c) {
            *o = o.clone() + tk.clone() * v;
        }
    }
    out
}

/// Closest pair between `∩H` (the `x` side) and `conv(P)` (the `y` side).
#[derive(Clone, Debug, PartialEq)]
pub struct VhPair<S> {
    pub outcome: PairOutcome<S>,
    /// Convex coefficients of `y` over `P`.
    pub coefficients: Vec<(usize, S)>,
}

pub fn closest_pair_vh<S: Scalar>(points: &[Point<S>], halfspaces: &[Inequality<S>], seed: u64) -> Result<VhPair<S>> {
    let hp = hull_inequalities(points)?;
    let outcome = closest_pair_hh(halfspaces, &hp, seed)?;
    let coefficients = convex_coefficients(&outcome.pair().y, points)
        .ok_or_else(|| Error::NumericFailure("closest point lost hull membership".into()))?;
    Ok(VhPair { outcome, coefficients })
}

/// Same answer as [`closest_pair_vh`] without building the hull of `P`.
///
/// Keeps a support set of at most `d + 2` points, solves the small problem
/// for it, and adds the point of `P` lying farthest on the near side of the
/// plane through `y` orthogonal to the pair. Each step strictly shrinks the
/// distance, so the loop ends once no point is on the near side.
pub fn closest_pair_vh_incremental<S: Scalar>(
    points: &[Point<S>],
    halfspaces: &[Inequality<S>],
    seed: u64,
) -> Result<VhPair<S>> {
    let first = points.first().ok_or(Error::EmptyPointSet)?;
    let d = first.dim();
    if points.len() <= d + 2 {
        return closest_pair_vh(points, halfspaces, seed);
    }
    for h in halfspaces {
        crate::geometry::check_dim(d, h.dim())?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut support: Vec<usize> = vec![rng.gen_range(0..points.len())];
    // The halfspace side is shared by every round; its move-to-front order
    // carries over, so later rounds mostly rescan without violations.
    let pool = qcons(halfspaces, Block::U);
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.shuffle(&mut rng);
    let mut last: Option<S> = None;
    loop {
        let chosen: Vec<Point<S>> = support.iter().map(|&i| points[i].clone()).collect();
        let hull = qcons(&hull_inequalities(&chosen)?, Block::V);
        let mut refs: Vec<&QCon<S>> = hull.iter().chain(order.iter().map(|&i| &pool[i])).collect();
        let end = refs.len();
        let z = welzl(&mut refs, end, &mut Vec::new(), d).ok_or(Error::EmptyIntersection)?;
        order = refs.iter().filter(|c| c.block == Block::U).map(|c| c.id).collect();
        let outcome = outcome_of(&z, d);
        let coefficients: Vec<(usize, S)> = convex_coefficients(&outcome.pair().y, &chosen)
            .ok_or_else(|| Error::NumericFailure("closest point lost hull membership".into()))?
            .into_iter()
            .filter(|(_, l)| !l.is_exact_zero())
            .map(|(i, l)| (support[i], l))
            .collect();
        let pair = match outcome {
            PairOutcome::Intersecting(pair) => {
                return Ok(VhPair { outcome: PairOutcome::Intersecting(pair), coefficients });
            }
            PairOutcome::Disjoint(pair) => pair,
        };
        let stalled = last.as_ref().is_some_and(|prev| !(prev.clone() - &pair.dist2).is_positive());
        let normal = sub(&pair.y, &pair.x);
        let level = dot(&normal, &pair.y);
        let mut worst: Option<(usize, S)> = None;
        for (i, p) in points.iter().enumerate() {
            let v = dot(&normal, p) - &level;
            if v.is_negative() && worst.as_ref().is_none_or(|(_, w)| v.cmp_s(w) == std::cmp::Ordering::Less) {
                worst = Some((i, v));
            }
        }
        match worst {
            Some((i, _)) if !(stalled && !S::EXACT) => {
                support = coefficients.iter().map(|(j, _)| *j).collect();
                support.push(i);
                last = Some(pair.dist2);
            }
            _ => return Ok(VhPair { outcome: PairOutcome::Disjoint(pair), coefficients }),
        }
    }
}
