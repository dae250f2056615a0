//! Brute-force reference answers and LP-type checks for the distance weight.
//!
//! Everything here goes through explicit facet enumeration of `conv(P)`, so
//! it only runs at desk scale.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Inequality, Point, Side};
use crate::scalar::Scalar;
use crate::smalllp::{
    closest_pair_hh, feasible_point, hull_inequalities, infeasibility_certificate, solve_lp_in_box, ClosestPair,
    LpBox, LpStatus, PairOutcome,
};

pub const MAX_ORACLE_POINTS: usize = 64;
pub const MAX_ORACLE_HALFSPACES: usize = 64;
pub const MAX_ORACLE_DIM: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Intersect,
    Disjoint,
}

fn check_scale<S: Scalar>(points: &[Point<S>], halfspaces: &[Inequality<S>]) -> Result<usize> {
    let d = points.first().ok_or(Error::EmptyPointSet)?.dim();
    if points.len() > MAX_ORACLE_POINTS {
        return Err(Error::ScaleExceeded { what: "points".into(), limit: MAX_ORACLE_POINTS });
    }
    if halfspaces.len() > MAX_ORACLE_HALFSPACES {
        return Err(Error::ScaleExceeded { what: "halfspaces".into(), limit: MAX_ORACLE_HALFSPACES });
    }
    if d > MAX_ORACLE_DIM {
        return Err(Error::ScaleExceeded { what: "dimension".into(), limit: MAX_ORACLE_DIM });
    }
    for p in points {
        crate::geometry::check_dim(d, p.dim())?;
    }
    for h in halfspaces {
        crate::geometry::check_dim(d, h.dim())?;
    }
    Ok(d)
}

fn combined<S: Scalar>(points: &[Point<S>], halfspaces: &[Inequality<S>]) -> Result<Vec<Inequality<S>>> {
    let mut all = hull_inequalities(points)?;
    all.extend(halfspaces.iter().cloned());
    Ok(all)
}

/// Intersects the facet description of `conv(P)` with `H` and tests emptiness.
pub fn oracle_decide<S: Scalar>(points: &[Point<S>], halfspaces: &[Inequality<S>]) -> Result<Decision> {
    check_scale(points, halfspaces)?;
    let all = combined(points, halfspaces)?;
    Ok(if infeasibility_certificate(&all).is_some() { Decision::Disjoint } else { Decision::Intersect })
}

/// A point of `conv(P) ∩ ∩H`, if there is one.
pub fn oracle_witness<S: Scalar>(points: &[Point<S>], halfspaces: &[Inequality<S>]) -> Result<Option<Point<S>>> {
    let d = check_scale(points, halfspaces)?;
    let all = combined(points, halfspaces)?;
    if infeasibility_certificate(&all).is_some() {
        return Ok(None);
    }
    let scale = points.iter().flat_map(|p| p.iter()).map(|c| c.to_f64().abs()).fold(1.0, f64::max);
    let bbox = LpBox::covering(d, scale, 4.0);
    Ok(feasible_point(&all, 3, &bbox).map(Point::new))
}

/// The closest pair with `x` in `∩H` and `y` in `conv(P)`, agreed on by three seeds.
pub fn oracle_closest<S: Scalar>(points: &[Point<S>], halfspaces: &[Inequality<S>]) -> Result<ClosestPair<S>> {
    check_scale(points, halfspaces)?;
    let hp = hull_inequalities(points)?;
    let mut found: Option<ClosestPair<S>> = None;
    for seed in [1u64, 2, 3] {
        let pair = match closest_pair_hh(halfspaces, &hp, seed)? {
            PairOutcome::Intersecting(_) => return Err(Error::Intersecting),
            PairOutcome::Disjoint(pair) => pair,
        };
        if let Some(prev) = &found {
            let agree = if S::EXACT {
                *prev == pair
            } else {
                (prev.dist2.clone() - &pair.dist2).is_zero()
            };
            if !agree {
                return Err(Error::InvariantViolation(format!("closest pair differs for seed {seed}")));
            }
        } else {
            found = Some(pair);
        }
    }
    Ok(found.expect("three seeds ran"))
}

/// Whether `{z : <x, z> = 1}` strictly separates `∩(P*)` from `conv(H*)`.
///
/// `normals` are the normals of `H`; `star_side` is the side of the
/// polar halfspaces of the points.
pub fn polar_separates<S: Scalar>(x: &[S], points: &[Point<S>], normals: &[Point<S>], star_side: Side) -> bool {
    let d = x.len();
    let star: Vec<Inequality<S>> = points
        .iter()
        .map(|p| match star_side {
            Side::OriginSide => Inequality::new(p.coords().to_vec(), S::one()),
            Side::FarSide => Inequality::geq(p.coords().to_vec(), S::one()),
        })
        .collect();
    let bbox = LpBox::default_for(d);
    let neg: Vec<S> = x.iter().map(|c| -c.clone()).collect();
    let hi = solve_lp_in_box(&neg, &star, 5, &bbox);
    let lo = solve_lp_in_box(x, &star, 5, &bbox);
    if hi.status == LpStatus::Infeasible {
        return false;
    }
    let value = |r: &crate::smalllp::LpResult<S>| r.optimum.as_ref().map(|p| crate::geometry::dot(x, p));
    let hs: Vec<S> = normals.iter().map(|z| z.dot(x) - S::one()).collect();
    let h_below = hs.iter().all(|v| v.is_negative());
    let h_above = hs.iter().all(|v| v.is_positive());
    // star set strictly above the plane: its minimum exceeds 1.
    let star_above = lo.status == LpStatus::Optimal && value(&lo).is_some_and(|v| (v - S::one()).is_positive());
    let star_below = hi.status == LpStatus::Optimal && value(&hi).is_some_and(|v| (v - S::one()).is_negative());
    (h_below && star_above) || (h_above && star_below)
}

/// `w(Q) = dist(conv(Q), ∩H)`, carried as the squared distance.
#[derive(Clone, Debug)]
pub struct WeightFn<S> {
    pub halfspaces: Vec<Inequality<S>>,
}

impl<S: Scalar> WeightFn<S> {
    pub fn new(halfspaces: Vec<Inequality<S>>) -> Self {
        WeightFn { halfspaces }
    }

    pub fn eval(&self, points: &[Point<S>]) -> Result<S> {
        match oracle_closest(points, &self.halfspaces) {
            Ok(pair) => Ok(pair.dist2),
            Err(Error::Intersecting) => Ok(S::zero()),
            Err(e) => Err(e),
        }
    }

    pub fn eval_subset(&self, points: &[Point<S>], idx: &[usize]) -> Result<S> {
        let sub: Vec<Point<S>> = idx.iter().map(|&i| points[i].clone()).collect();
        self.eval(&sub)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AxiomReport {
    pub chains: usize,
    /// Chains skipped because `conv(Q)` already met `∩H`.
    pub skipped: usize,
    pub violations: Vec<String>,
    /// Chains whose basis needed `d + 1` points.
    pub relaxed: Vec<String>,
}

impl AxiomReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Monotonicity, basis existence and locality of [`WeightFn`] over random
/// chains `Q ⊂ Q ∪ {c} ⊆ P`.
pub fn check_lp_type_axioms<S: Scalar>(
    points: &[Point<S>],
    halfspaces: &[Inequality<S>],
    trials: usize,
    seed: u64,
) -> Result<AxiomReport> {
    let d = check_scale(points, halfspaces)?;
    let n = points.len();
    if n < 2 {
        return Err(Error::Precondition("need at least two points".into()));
    }
    let w = WeightFn::new(halfspaces.to_vec());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AxiomReport::default();
    for trial in 0..trials {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let k = rng.gen_range(1..n);
        let mut q: Vec<usize> = order[..k].to_vec();
        q.sort_unstable();
        let c = order[k];
        let wq = w.eval_subset(points, &q)?;
        if !wq.is_positive() {
            report.skipped += 1;
            continue;
        }
        report.chains += 1;
        let mut qc = q.clone();
        qc.push(c);
        let wqc = w.eval_subset(points, &qc)?;
        if wqc.cmp_s(&wq) == std::cmp::Ordering::Greater {
            report.violations.push(format!("trial {trial}: monotonicity, Q={q:?} c={c}"));
        }

        let basis = match find_basis(&w, points, &q, &wq, d)? {
            Some(b) => b,
            None => match find_basis(&w, points, &q, &wq, d + 1)? {
                Some(b) => {
                    report.relaxed.push(format!("trial {trial}: basis of size {} for Q={q:?}", b.len()));
                    b
                }
                None => {
                    report.violations.push(format!("trial {trial}: no basis, Q={q:?}"));
                    continue;
                }
            },
        };
        if wqc.cmp_s(&wq) == std::cmp::Ordering::Less {
            let mut bc = basis.clone();
            bc.push(c);
            let wbc = w.eval_subset(points, &bc)?;
            if wbc.cmp_s(&wq) != std::cmp::Ordering::Less {
                report.violations.push(format!("trial {trial}: locality, B={basis:?} c={c}"));
            }
        }
    }
    Ok(report)
}

fn find_basis<S: Scalar>(w: &WeightFn<S>, points: &[Point<S>], q: &[usize], wq: &S, max: usize) -> Result<Option<Vec<usize>>> {
    let lo = if max > 1 && max > points[0].dim() { max } else { 1 };
    for size in lo..=max.min(q.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let b: Vec<usize> = idx.iter().map(|&i| q[i]).collect();
            if w.eval_subset(points, &b)?.cmp_s(wq) == std::cmp::Ordering::Equal {
                return Ok(Some(b));
            }
            if !next_combination(&mut idx, q.len()) {
                break;
            }
        }
    }
    Ok(None)
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
