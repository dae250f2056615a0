//! Randomized incremental linear programming in small dimension.
//!
//! The solver works inside an axis-parallel bounding box and breaks ties
//! lexicographically (objective first, then `x_1`, `x_2`, ...), so every
//! subproblem has a unique optimum. Unboundedness is detected by re-solving
//! with a box twice as large and comparing objective values.

use std::cmp::Ordering;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{dot, Inequality, Point};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpResult<S> {
    pub status: LpStatus,
    pub optimum: Option<Point<S>>,
    pub value: Option<S>,
    /// Indices of input constraints in the optimal basis (at most `d`).
    pub tight_constraints: Vec<usize>,
}

/// Bounding box used by the solver: `center[j] - radius <= x_j <= center[j] + radius`.
#[derive(Clone, Debug)]
pub struct LpBox<S> {
    pub center: Vec<S>,
    pub radius: S,
}

impl<S: Scalar> LpBox<S> {
    pub fn around_origin(dim: usize, radius: S) -> Self {
        LpBox { center: vec![S::zero(); dim], radius }
    }

    /// A generous default: `2^40` in exact mode, `1e7` in float mode.
    pub fn default_for(dim: usize) -> Self {
        let radius = if S::EXACT {
            S::from_i64(1i64 << 40)
        } else {
            S::from_i64(10_000_000)
        };
        Self::around_origin(dim, radius)
    }

    /// Box covering every coordinate magnitude in `data`, scaled by `factor`.
    pub fn covering(dim: usize, data_scale: f64, factor: f64) -> Self {
        let r = (data_scale.abs() + 1.0) * factor;
        let radius = if S::EXACT {
            S::from_i64(r.min(9.0e15).ceil() as i64)
        } else {
            S::from_f64(r)
        };
        Self::around_origin(dim, radius)
    }

    fn lo(&self) -> Vec<S> {
        self.center.iter().map(|c| c.clone() - &self.radius).collect()
    }

    fn hi(&self) -> Vec<S> {
        self.center.iter().map(|c| c.clone() + &self.radius).collect()
    }

    fn doubled(&self) -> Self {
        LpBox { center: self.center.clone(), radius: self.radius.clone() * S::from_i64(2) }
    }
}

/// Minimizes `<objective, x>` subject to `constraints` (all `<a, x> <= b`).
pub fn solve_lp<S: Scalar>(objective: &[S], constraints: &[Inequality<S>], seed: u64) -> LpResult<S> {
    let dim = objective.len();
    solve_lp_in_box(objective, constraints, seed, &LpBox::default_for(dim))
}

pub fn solve_lp_in_box<S: Scalar>(
    objective: &[S],
    constraints: &[Inequality<S>],
    seed: u64,
    bbox: &LpBox<S>,
) -> LpResult<S> {
    let Some((x, tight)) = lex_min_in_box(objective, constraints, seed, bbox) else {
        return LpResult { status: LpStatus::Infeasible, optimum: None, value: None, tight_constraints: vec![] };
    };
    let value = dot(objective, &x);
    if objective.iter().any(|c| !c.is_exact_zero()) {
        if let Some((x2, _)) = lex_min_in_box(objective, constraints, seed, &bbox.doubled()) {
            let v2 = dot(objective, &x2);
            if improves(&v2, &value) {
                return LpResult { status: LpStatus::Unbounded, optimum: None, value: None, tight_constraints: vec![] };
            }
        }
    }
    let tight: Vec<usize> = tight.into_iter().flatten().collect();
    LpResult { status: LpStatus::Optimal, optimum: Some(Point::new(x)), value: Some(value), tight_constraints: tight }
}

fn improves<S: Scalar>(candidate: &S, current: &S) -> bool {
    if S::EXACT {
        candidate.cmp_s(current) == Ordering::Less
    } else {
        let c = candidate.to_f64();
        let v = current.to_f64();
        c < v - 1e-7 * (1.0 + v.abs())
    }
}

/// Some point satisfying every constraint inside the box, or `None`.
pub fn feasible_point<S: Scalar>(constraints: &[Inequality<S>], seed: u64, bbox: &LpBox<S>) -> Option<Vec<S>> {
    let dim = bbox.center.len();
    lex_min_in_box(&vec![S::zero(); dim], constraints, seed, bbox).map(|(x, _)| x)
}

/// Lexicographic minimum inside the box; returns the point and the ids of
/// tight input constraints (`None` entries are box facets).
///
/// Large inputs go through Clarkson's sampling loop: solve on a random
/// sample plus the violators collected so far, until nothing is violated.
pub fn lex_min_in_box<S: Scalar>(
    objective: &[S],
    constraints: &[Inequality<S>],
    seed: u64,
    bbox: &LpBox<S>,
) -> Option<(Vec<S>, Vec<Option<usize>>)> {
    let dim = objective.len();
    assert!(dim >= 1, "LP dimension must be at least 1");
    let n = constraints.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if n <= SAMPLING_FACTOR * dim * dim {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        return seidel_on(objective, constraints, &order, bbox);
    }
    let root = (n as f64).sqrt();
    let r = (dim as f64 * root).ceil() as usize;
    let cap = (2.0 * root).ceil() as usize;
    let mut kept: Vec<usize> = Vec::new();
    let mut marked = vec![false; n];
    for _ in 0..MAX_SAMPLING_ROUNDS {
        let mut subset = kept.clone();
        for i in sample(&mut rng, n, r) {
            if !marked[i] {
                subset.push(i);
            }
        }
        subset.shuffle(&mut rng);
        let (x, tight) = seidel_on(objective, constraints, &subset, bbox)?;
        let violators: Vec<usize> =
            (0..n).filter(|&i| (dot(&constraints[i].a, &x) - &constraints[i].b).is_positive()).collect();
        if violators.is_empty() {
            return Some((x, tight));
        }
        if violators.len() <= cap {
            for i in violators {
                marked[i] = true;
                kept.push(i);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    seidel_on(objective, constraints, &order, bbox)
}

/// Inputs up to `SAMPLING_FACTOR * d^2` constraints are solved directly.
const SAMPLING_FACTOR: usize = 16;
const MAX_SAMPLING_ROUNDS: usize = 64;

/// Seidel's algorithm on `constraints[order]`, inserted in that order.
fn seidel_on<S: Scalar>(
    objective: &[S],
    constraints: &[Inequality<S>],
    order: &[usize],
    bbox: &LpBox<S>,
) -> Option<(Vec<S>, Vec<Option<usize>>)> {
    let dim = objective.len();
    let mut levels: Vec<Level<S>> = (0..=dim).map(|_| Level::default()).collect();
    let top = &mut levels[dim];
    top.rows.reserve(order.len() * (dim + 1));
    for &i in order {
        let c = &constraints[i];
        debug_assert_eq!(c.dim(), dim);
        top.rows.extend(c.a.iter().cloned());
        top.rows.push(c.b.clone());
        top.ids.push(Some(i));
    }
    top.objs.extend(objective.iter().cloned());
    for j in 0..dim {
        top.objs.extend((0..dim).map(|l| if l == j { S::one() } else { S::zero() }));
    }
    top.lo = bbox.lo();
    top.hi = bbox.hi();
    if !seidel(&mut levels, dim) {
        return None;
    }
    let top = levels.swap_remove(dim);
    Some((top.x, top.tight))
}

/// One dimension of the recursion: constraints as flat rows `a_1..a_k, b`,
/// objectives as flat rows of width `k`, and the box. Buffers are reused
/// across the violations handled at the level above.
struct Level<S> {
    rows: Vec<S>,
    ids: Vec<Option<usize>>,
    objs: Vec<S>,
    lo: Vec<S>,
    hi: Vec<S>,
    x: Vec<S>,
    tight: Vec<Option<usize>>,
    ratios: Vec<S>,
}

impl<S> Default for Level<S> {
    fn default() -> Self {
        Level {
            rows: Vec::new(),
            ids: Vec::new(),
            objs: Vec::new(),
            lo: Vec::new(),
            hi: Vec::new(),
            x: Vec::new(),
            tight: Vec::new(),
            ratios: Vec::new(),
        }
    }
}

/// Solves level `k` in place, leaving the optimum in `levels[k].x`.
fn seidel<S: Scalar>(levels: &mut [Level<S>], k: usize) -> bool {
    if k == 1 {
        return seidel_1d(&mut levels[1]);
    }
    let (lower, upper) = levels.split_at_mut(k);
    let cur = &mut upper[0];
    let w = k + 1;
    box_optimum(&cur.objs, &cur.lo, &cur.hi, &mut cur.x);
    cur.tight.clear();
    for i in 0..cur.ids.len() {
        let row = &cur.rows[i * w..(i + 1) * w];
        if !(dot(&row[..k], &cur.x) - &row[k]).is_positive() {
            continue;
        }
        let Some(pivot) = pick_pivot(&row[..k]) else { return false };
        project(cur, i, pivot, &mut lower[k - 1]);
        if !seidel(lower, k - 1) {
            return false;
        }
        let sub = &lower[k - 1];
        lift(&sub.x, &cur.rows[i * w..(i + 1) * w], pivot, &mut cur.x);
        cur.tight.clear();
        cur.tight.extend_from_slice(&sub.tight);
        cur.tight.push(cur.ids[i]);
    }
    true
}

fn box_optimum<S: Scalar>(objs: &[S], lo: &[S], hi: &[S], x: &mut Vec<S>) {
    let k = lo.len();
    x.clear();
    x.extend((0..k).map(|j| {
        let dir = objs.chunks(k).map(|o| o[j].sign()).find(|s| *s != Ordering::Equal);
        match dir {
            Some(Ordering::Less) => hi[j].clone(),
            _ => lo[j].clone(),
        }
    }));
}

/// Variable to eliminate; `None` when the constraint has no support
/// (a violated `0 <= b` with `b < 0`, hence infeasible).
fn pick_pivot<S: Scalar>(a: &[S]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (j, v) in a.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let mag = v.to_f64().abs();
        if best.map_or(true, |(_, m)| mag > m) {
            best = Some((j, mag));
        }
    }
    best.map(|(j, _)| j)
}

/// Substitutes `x_j = (b - sum_{l != j} a_l x_l) / a_j` from row `i` of `cur`
/// into the rows before it, the box and the objectives, writing `sub`.
fn project<S: Scalar>(cur: &mut Level<S>, i: usize, j: usize, sub: &mut Level<S>) {
    let k = cur.lo.len();
    let w = k + 1;
    let plane = &cur.rows[i * w..(i + 1) * w];
    let aj = &plane[j];
    let mut ratios = std::mem::take(&mut cur.ratios);
    ratios.clear();
    ratios.extend((0..k).filter(|&l| l != j).map(|l| plane[l].clone() / aj));
    let b_ratio = plane[k].clone() / aj;

    // Pushes the reduced coefficients of `v` (width >= k, pivot at j).
    let reduce = |v: &[S], out: &mut Vec<S>| {
        let vj = &v[j];
        let mut r = 0;
        for (l, vl) in v[..k].iter().enumerate() {
            if l == j {
                continue;
            }
            if vj.is_exact_zero() {
                out.push(vl.clone());
            } else {
                out.push(vl.clone() - vj.clone() * &ratios[r]);
            }
            r += 1;
        }
    };

    sub.rows.clear();
    sub.ids.clear();
    // Box facets of the eliminated variable come first.
    for (sign, bound) in [(S::one(), cur.hi[j].clone() - &b_ratio), (-S::one(), b_ratio.clone() - &cur.lo[j])] {
        for r in ratios.iter() {
            let v = -(sign.clone() * r);
            sub.rows.push(v);
        }
        sub.rows.push(bound);
        sub.ids.push(None);
    }
    for c in 0..i {
        let row = &cur.rows[c * w..(c + 1) * w];
        reduce(row, &mut sub.rows);
        let b = if row[j].is_exact_zero() { row[k].clone() } else { row[k].clone() - row[j].clone() * &b_ratio };
        sub.rows.push(b);
        sub.ids.push(cur.ids[c]);
    }
    sub.objs.clear();
    for o in cur.objs.chunks(k) {
        reduce(o, &mut sub.objs);
    }
    sub.lo.clear();
    sub.lo.extend(cur.lo.iter().enumerate().filter(|&(l, _)| l != j).map(|(_, v)| v.clone()));
    sub.hi.clear();
    sub.hi.extend(cur.hi.iter().enumerate().filter(|&(l, _)| l != j).map(|(_, v)| v.clone()));
    cur.ratios = ratios;
}

fn lift<S: Scalar>(y: &[S], plane: &[S], j: usize, x: &mut Vec<S>) {
    let k = y.len() + 1;
    x.clear();
    let mut acc = plane[k].clone();
    let mut r = 0;
    for l in 0..k {
        if l == j {
            x.push(S::zero());
            continue;
        }
        acc = acc - plane[l].clone() * &y[r];
        x.push(y[r].clone());
        r += 1;
    }
    x[j] = acc / &plane[j];
}

fn seidel_1d<S: Scalar>(level: &mut Level<S>) -> bool {
    let mut lower = (level.lo[0].clone(), None);
    let mut upper = (level.hi[0].clone(), None);
    for (row, id) in level.rows.chunks(2).zip(&level.ids) {
        let a = &row[0];
        match a.sign() {
            Ordering::Greater => {
                let v = row[1].clone() / a;
                if v.cmp_s(&upper.0) == Ordering::Less {
                    upper = (v, *id);
                }
            }
            Ordering::Less => {
                let v = row[1].clone() / a;
                if v.cmp_s(&lower.0) == Ordering::Greater {
                    lower = (v, *id);
                }
            }
            Ordering::Equal => {
                if row[1].is_negative() {
                    return false;
                }
            }
        }
    }
    level.x.clear();
    level.tight.clear();
    match lower.0.cmp_s(&upper.0) {
        Ordering::Greater => return false,
        Ordering::Equal if !S::EXACT => {
            level.x.push((lower.0.clone() + &upper.0).half());
            level.tight.push(lower.1.or(upper.1));
            return true;
        }
        _ => {}
    }
    let dir = level.objs.iter().map(|o| o.sign()).find(|s| *s != Ordering::Equal);
    let (v, id) = match dir {
        Some(Ordering::Less) => upper,
        _ => lower,
    };
    level.x.push(v);
    level.tight.push(id);
    true
}
