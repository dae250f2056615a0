//! Convex-hull queries on small point sets: membership, Carathéodory bases,
//! supporting directions and brute-force facet enumeration.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::{dot, sub, Inequality, Point};
use crate::scalar::Scalar;

use super::linalg::{rref, solve_affine};
use super::lp::{feasible_point, LpBox};
use super::simplex::nonneg_combination;

/// Result of [`point_in_hull`].
#[derive(Clone, Debug, PartialEq)]
pub struct HullTest<S> {
    pub inside: bool,
    /// Convex coefficients `(index, lambda)` with at most `d + 1` entries,
    /// present whenever `q` lies in the closed hull.
    pub coefficients: Option<Vec<(usize, S)>>,
}

/// Convex coefficients of `q` over `points`, from a basic feasible solution.
pub fn convex_coefficients<S: Scalar>(q: &[S], points: &[Point<S>]) -> Option<Vec<(usize, S)>> {
    if points.is_empty() {
        return None;
    }
    let columns: Vec<Vec<S>> = points
        .iter()
        .map(|p| {
            let mut c = p.coords().to_vec();
            c.push(S::one());
            c
        })
        .collect();
    let mut target = q.to_vec();
    target.push(S::one());
    nonneg_combination(&columns, &target)
}

/// Membership of `q` in `conv(points)`; with `strict`, in its interior.
pub fn point_in_hull<S: Scalar>(q: &[S], points: &[Point<S>], strict: bool) -> HullTest<S> {
    let coefficients = convex_coefficients(q, points);
    let inside = match (&coefficients, strict) {
        (None, _) => false,
        (Some(_), false) => true,
        (Some(_), true) => supporting_direction(q, points).is_none(),
    };
    HullTest { inside, coefficients }
}

/// A nonzero `z` with `<z, p - q> <= 0` for every point, or `None` when `q`
/// lies in the interior of the hull.
///
/// Any nonzero `z` has `<v, z> < 0` for some `v` of the positive basis
/// `e_1, ..., e_d, -(e_1 + ... + e_d)`, so `d + 1` feasibility problems
/// decide whether the cone of such `z` is trivial.
pub fn supporting_direction<S: Scalar>(q: &[S], points: &[Point<S>]) -> Option<Vec<S>> {
    let d = q.len();
    let mut cons: Vec<Inequality<S>> = points.iter().map(|p| Inequality::new(sub(p, q), S::zero())).collect();
    let radius = S::from_i64(4 * (d * d) as i64 + 4);
    let bbox = LpBox::around_origin(d, radius);
    for k in 0..=d {
        let v: Vec<S> = if k < d {
            (0..d).map(|j| if j == k { S::one() } else { S::zero() }).collect()
        } else {
            vec![-S::one(); d]
        };
        cons.push(Inequality::new(v, -S::one()));
        let found = feasible_point(&cons, k as u64, &bbox);
        cons.pop();
        if let Some(z) = found {
            return Some(z);
        }
    }
    None
}

/// At most `d + 1` points of `points` whose hull contains `q`, with weights.
pub fn caratheodory_basis<S: Scalar>(q: &[S], points: &[Point<S>]) -> Result<Vec<(usize, S)>> {
    convex_coefficients(q, points).ok_or(Error::NotInHull)
}

/// Dimension of the affine hull of `points` (`0` for a single point).
pub fn affine_dimension<S: Scalar>(points: &[Point<S>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = points[0].coords();
    let mut m: Vec<Vec<S>> = points[1..].iter().map(|p| sub(p, base)).collect();
    rref(&mut m, base.len()).len()
}

/// Facets of a full-dimensional hull as inequalities `<a, x> <= b`.
pub fn enumerate_facets<S: Scalar>(points: &[Point<S>]) -> Result<Vec<Inequality<S>>> {
    let Some(first) = points.first() else { return Err(Error::EmptyPointSet) };
    let d = first.dim();
    for p in points {
        crate::geometry::check_dim(d, p.dim())?;
    }
    let affine_dim = affine_dimension(points);
    if affine_dim < d {
        return Err(Error::DegenerateHull { affine_dim, dim: d });
    }
    let coords: Vec<Vec<S>> = points.iter().map(|p| p.coords().to_vec()).collect();
    Ok(facets_full(&coords))
}

/// Inequalities describing `conv(points)` for any affine dimension:
/// facets within the affine hull plus each hull equation as two inequalities.
pub fn hull_inequalities<S: Scalar>(points: &[Point<S>]) -> Result<Vec<Inequality<S>>> {
    let Some(first) = points.first() else { return Err(Error::EmptyPointSet) };
    let d = first.dim();
    for p in points {
        crate::geometry::check_dim(d, p.dim())?;
    }
    let base = first.coords().to_vec();
    let diffs: Vec<Vec<S>> = points[1..].iter().map(|p| sub(p, &base)).collect();

    // Independent difference vectors spanning the affine hull.
    let mut span: Vec<Vec<S>> = Vec::new();
    for v in &diffs {
        let mut trial = span.clone();
        trial.push(v.clone());
        let mut m = trial.clone();
        if rref(&mut m, d).len() == trial.len() {
            span = trial;
        }
        if span.len() == d {
            break;
        }
    }
    let k = span.len();
    if k == d {
        return Ok(facets_full(&points.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>()));
    }

    let mut out = Vec::new();
    // Equations <w, x> = <w, base> for w orthogonal to the span.
    let zeros = vec![S::zero(); k];
    let normals = if k == 0 {
        (0..d)
            .map(|j| (0..d).map(|l| if l == j { S::one() } else { S::zero() }).collect())
            .collect()
    } else {
        solve_affine(&span, &zeros, d).expect("homogeneous system").null_basis
    };
    for w in normals {
        let b = dot(&w, &base);
        out.push(Inequality::new(w.clone(), b.clone()));
        out.push(Inequality::new(w.into_iter().map(|c| -c).collect(), -b));
    }
    if k == 0 {
        return Ok(out);
    }

    // Local coordinates: x_S - base_S = M t on k coordinates where M is invertible.
    let mut m: Vec<Vec<S>> = span.clone();
    let cols = rref(&mut m, d);
    debug_assert_eq!(cols.len(), k);
    let mmat: Vec<Vec<S>> = cols.iter().map(|&c| span.iter().map(|v| v[c].clone()).collect()).collect();
    let local: Vec<Vec<S>> = points
        .iter()
        .map(|p| {
            let rhs: Vec<S> = cols.iter().map(|&c| p[c].clone() - &base[c]).collect();
            super::linalg::solve_unique(&mmat, &rhs).expect("invertible chart")
        })
        .collect();
    let mt: Vec<Vec<S>> = (0..k).map(|i| (0..k).map(|j| mmat[j][i].clone()).collect()).collect();
    for f in facets_full(&local) {
        // <g, t> <= h with t = M^{-1}(x_S - base_S).
        let c = super::linalg::solve_unique(&mt, &f.a).expect("invertible chart");
        let mut a = vec![S::zero(); d];
        let mut shift = S::zero();
        for (i, &col) in cols.iter().enumerate() {
            shift = shift + c[i].clone() * &base[col];
            a[col] = c[i].clone();
        }
        out.push(Inequality::new(a, f.b + shift));
    }
    Ok(out)
}

/// Facets of a full-dimensional point set in `R^k`, `k >= 1`, deduplicated.
fn facets_full<S: Scalar>(pts: &[Vec<S>]) -> Vec<Inequality<S>> {
    let k = pts[0].len();
    if k == 1 {
        let mut lo = pts[0][0].clone();
        let mut hi = pts[0][0].clone();
        for p in pts {
            if p[0].cmp_s(&lo) == Ordering::Less {
                lo = p[0].clone();
            }
            if p[0].cmp_s(&hi) == Ordering::Greater {
                hi = p[0].clone();
            }
        }
        return vec![Inequality::new(vec![-S::one()], -lo), Inequality::new(vec![S::one()], hi)];
    }

    let filter = S::EXACT.then(|| FloatFilter::new(pts)).flatten();
    let n = pts.len();
    let mut out: Vec<Inequality<S>> = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if n < k {
        return out;
    }
    loop {
        if let Some(f) = facet_through(pts, &idx, filter.as_ref()) {
            if !out.iter().any(|g| same_halfspace(g, &f)) {
                out.push(f);
            }
        }
        // Next k-combination in lexicographic order.
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// The supporting halfspace spanned by `pts[idx]`, if all points lie weakly on one side.
fn facet_through<S: Scalar>(pts: &[Vec<S>], idx: &[usize], filter: Option<&FloatFilter>) -> Option<Inequality<S>> {
    if let Some(f) = filter {
        match f.classify(idx) {
            FilterVerdict::Rejected => return None,
            FilterVerdict::Unknown => {}
        }
    }
    let k = pts[0].len();
    let base = &pts[idx[0]];
    let rows: Vec<Vec<S>> = idx[1..].iter().map(|&i| sub(&pts[i], base)).collect();
    let mut normal = cofactor_normal(&rows, k);
    if normal.iter().all(|c| c.is_zero()) {
        return None;
    }
    if !S::EXACT {
        // Scale to unit max-norm so the side tolerance acts on distances.
        let m = normal.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
        let inv = S::from_f64(1.0 / m);
        normal = normal.into_iter().map(|c| c * &inv).collect();
    }
    let offset = dot(&normal, base);
    let mut pos = false;
    let mut neg = false;
    for p in pts {
        match (dot(&normal, p) - &offset).sign() {
            Ordering::Greater => pos = true,
            Ordering::Less => neg = true,
            Ordering::Equal => {}
        }
        if pos && neg {
            return None;
        }
    }
    if pos {
        Some(Inequality::new(normal.into_iter().map(|c| -c).collect(), -offset))
    } else {
        Some(Inequality::new(normal, offset))
    }
}

/// Normal of the hyperplane spanned by `k - 1` difference rows in `R^k`:
/// `n_j = (-1)^j det(rows without column j)`.
fn cofactor_normal<S: Scalar>(rows: &[Vec<S>], k: usize) -> Vec<S> {
    (0..k)
        .map(|j| {
            let minor: Vec<Vec<S>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let det = determinant(minor);
            if j % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

fn determinant<S: Scalar>(mut m: Vec<Vec<S>>) -> S {
    let n = m.len();
    if n == 0 {
        return S::one();
    }
    let mut det = S::one();
    for c in 0..n {
        let p = if S::EXACT {
            (c..n).find(|&i| !m[i][c].is_exact_zero())
        } else {
            (c..n)
                .max_by(|&a, &b| m[a][c].to_f64().abs().total_cmp(&m[b][c].to_f64().abs()))
                .filter(|&i| m[i][c].to_f64() != 0.0)
        };
        let Some(p) = p else { return S::zero() };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det = det * &pivot;
        for i in c + 1..n {
            if m[i][c].is_exact_zero() {
                continue;
            }
            let f = m[i][c].clone() / &pivot;
            for j in c..n {
                let v = m[c][j].clone();
                m[i][j] = m[i][j].clone() - f.clone() * &v;
            }
        }
    }
    det
}

fn same_halfspace<S: Scalar>(a: &Inequality<S>, b: &Inequality<S>) -> bool {
    // Positive multiples describe the same halfspace.
    let Some(j) = a.a.iter().position(|c| !c.is_zero()) else { return false };
    if b.a[j].is_zero() || a.a[j].sign() != b.a[j].sign() {
        return false;
    }
    let ra = a.a[j].abs();
    let rb = b.a[j].abs();
    let scaled = |v: &S, r: &S| v.clone() / r;
    a.a.iter().zip(&b.a).all(|(x, y)| (scaled(x, &ra) - scaled(y, &rb)).is_zero())
        && (scaled(&a.b, &ra) - scaled(&b.b, &rb)).is_zero()
}

enum FilterVerdict {
    Rejected,
    Unknown,
}

/// Floating-point prefilter for exact facet enumeration: rejects a
/// candidate only when two points are certainly on opposite sides.
struct FloatFilter {
    pts: Vec<Vec<f64>>,
}

impl FloatFilter {
    fn new<S: Scalar>(pts: &[Vec<S>]) -> Option<Self> {
        if pts[0].len() > 6 {
            return None;
        }
        let f: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|c| c.to_f64()).collect()).collect();
        let ok = f.iter().flatten().all(|v| v.is_finite() && (v.abs() < 1e150) && (*v == 0.0 || v.abs() > 1e-150));
        ok.then_some(FloatFilter { pts: f })
    }

    fn classify(&self, idx: &[usize]) -> FilterVerdict {
        let k = self.pts[0].len();
        let base = &self.pts[idx[0]];
        let rows: Vec<Vec<f64>> = idx[1..].iter().map(|&i| self.pts[i].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
        let abs_rows: Vec<Vec<f64>> = idx[1..]
            .iter()
            .map(|&i| self.pts[i].iter().zip(base).map(|(a, b)| a.abs() + b.abs()).collect())
            .collect();
        let mut normal = Vec::with_capacity(k);
        let mut bound = Vec::with_capacity(k);
        for j in 0..k {
            let d = minor_det(&rows, j, false);
            let p = minor_det(&abs_rows, j, true);
            normal.push(if j % 2 == 0 { d } else { -d });
            bound.push(p);
        }
        let terms = factorial(k - 1) as f64 + 4.0 * k as f64 + 16.0;
        let gamma = 2.0 * terms * f64::EPSILON;
        let mut pos = false;
        let mut neg = false;
        for p in &self.pts {
            let mut s = 0.0;
            let mut err = 0.0;
            for j in 0..k {
                s += normal[j] * (p[j] - base[j]);
                err += bound[j] * (p[j].abs() + base[j].abs());
            }
            let tol = gamma * err;
            if s > tol {
                pos = true;
            } else if s < -tol {
                neg = true;
            }
            if pos && neg {
                return FilterVerdict::Rejected;
            }
        }
        FilterVerdict::Unknown
    }
}

/// Determinant (or permanent when `abs`) of `rows` with column `skip` removed.
fn minor_det(rows: &[Vec<f64>], skip: usize, abs: bool) -> f64 {
    let cols: Vec<usize> = (0..rows.len() + 1).filter(|&c| c != skip).collect();
    expand(rows, 0, &cols, abs)
}

fn expand(rows: &[Vec<f64>], r: usize, cols: &[usize], abs: bool) -> f64 {
    if r == rows.len() {
        return 1.0;
    }
    let mut acc = 0.0;
    for (i, &c) in cols.iter().enumerate() {
        let v = rows[r][c];
        if v == 0.0 {
            continue;
        }
        let rest: Vec<usize> = cols.iter().enumerate().filter(|&(l, _)| l != i).map(|(_, &x)| x).collect();
        let sub = expand(rows, r + 1, &rest, abs);
        if abs || i % 2 == 0 {
            acc += v * sub;
        } else {
            acc -= v * sub;
        }
    }
    acc
}

fn factorial(n: usize) -> usize {
    (1..=n).product::<usize>().max(1)
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

    fn pts(v: &[&[i64]]) -> Vec<Point<Q>> {
        v.iter().map(|c| Point::from_i64s(c)).collect()
    }

    fn combine(coeffs: &[(usize, Q)], points: &[Point<Q>]) -> Vec<Q> {
        let d = points[0].dim();
        let mut acc = vec![q("0"); d];
        for (i, l) in coeffs {
            for j in 0..d {
                acc[j] = acc[j].clone() + l.clone() * &points[*i][j];
            }
        }
        acc
    }

    #[test]
    fn membership_examples() {
        let square = pts(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]);
        let t = point_in_hull(&[q("0"), q("0")], &square, false);
        assert!(t.inside);
        let c = t.coefficients.unwrap();
        assert_eq!(combine(&c, &square), vec![q("0"), q("0")]);
        assert!(c.len() <= 3);
        assert!(point_in_hull(&[q("0"), q("0")], &square, true).inside);

        let far = pts(&[&[2, 0], &[3, 1], &[3, -1]]);
        assert!(!point_in_hull(&[q("0"), q("0")], &far, false).inside);

        let tri = pts(&[&[1, 0], &[-1, 0], &[0, 1]]);
        assert!(point_in_hull(&[q("0"), q("0")], &tri, false).inside);
        assert!(!point_in_hull(&[q("0"), q("0")], &tri, true).inside);
    }

    #[test]
    fn caratheodory_examples() {
        let p: Vec<Point<Q>> = vec![
            Point::from_i64s(&[1, 0]),
            Point::from_i64s(&[-1, 0]),
            Point::from_i64s(&[0, 1]),
            Point::from_i64s(&[0, -1]),
            Point::new(vec![q("1/10"), q("1/10")]),
        ];
        let b = caratheodory_basis(&[q("0"), q("0")], &p).unwrap();
        assert!(b.len() <= 3);
        let sum: Q = b.iter().map(|(_, l)| l.clone()).sum();
        assert_eq!(sum, q("1"));
        assert_eq!(combine(&b, &p), vec![q("0"), q("0")]);

        let seg = pts(&[&[1, 0], &[-1, 0]]);
        let b = caratheodory_basis(&[q("0"), q("0")], &seg).unwrap();
        assert_eq!(b, vec![(0, q("1/2")), (1, q("1/2"))]);
        assert_eq!(caratheodory_basis(&[q("5"), q("0")], &seg), Err(Error::NotInHull));
    }

    #[test]
    fn square_and_triangle_facets() {
        let square = pts(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]);
        let f = enumerate_facets(&square).unwrap();
        assert_eq!(f.len(), 4);
        for x in [[2, 0], [-2, 0], [0, 2], [0, -2]] {
            let x: Vec<Q> = x.iter().map(|&v| Q::from_i64(v)).collect();
            assert!(f.iter().any(|h| !h.contains(&x)));
        }
        let tri = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(enumerate_facets(&tri).unwrap().len(), 3);
        let seg = pts(&[&[0, 0], &[1, 1], &[2, 2]]);
        assert!(matches!(enumerate_facets(&seg), Err(Error::DegenerateHull { affine_dim: 1, dim: 2 })));
    }

    #[test]
    fn circle_points_give_one_facet_each() {
        // Rational points on the unit circle from Pythagorean parametrization.
        let p: Vec<Point<Q>> = (0..20)
            .map(|i| {
                let t = Q::new((2 * i - 19).into(), 7.into());
                let den = t.clone() * &t + q("1");
                Point::new(vec![(q("1") - t.clone() * &t) / &den, q("2") * t / den])
            })
            .collect();
        assert_eq!(enumerate_facets(&p).unwrap().len(), 20);
    }

    #[test]
    fn degenerate_hull_inequalities() {
        let seg = pts(&[&[0, 0], &[2, 2], &[1, 1]]);
        let h = hull_inequalities(&seg).unwrap();
        let inside = |x: &[i64]| {
            let x: Vec<Q> = x.iter().map(|&v| Q::from_i64(v)).collect();
            h.iter().all(|c| c.contains(&x))
        };
        assert!(inside(&[1, 1]) && inside(&[0, 0]) && inside(&[2, 2]));
        assert!(!inside(&[3, 3]) && !inside(&[1, 0]) && !inside(&[-1, -1]));

        let single = pts(&[&[3, -1, 2]]);
        let h = hull_inequalities(&single).unwrap();
        assert!(h.iter().all(|c| c.contains(&single[0])));
        assert!(!h.iter().all(|c| c.contains(&[q("3"), q("-1"), q("5/2")])));

        let tri3 = pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let h = hull_inequalities(&tri3).unwrap();
        let c = [q("1/3"), q("1/3"), q("1/3")];
        assert!(h.iter().all(|ineq| ineq.contains(&c)));
        assert!(!h.iter().all(|ineq| ineq.contains(&[q("1/2"), q("1/2"), q("1/2")])));
        assert!(!h.iter().all(|ineq| ineq.contains(&[q("-1/2"), q("1"), q("1/2")])));
    }

    #[test]
    fn float_facets_match() {
        let square: Vec<Point<Float>> = [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0], [0.2, 0.1]]
            .iter()
            .map(|c| Point::from_f64s(c))
            .collect();
        assert_eq!(enumerate_facets(&square).unwrap().len(), 4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn facets_contain_points_and_touch_d(raw in prop::collection::vec(prop::collection::vec(-20i64..20, 3), 4..12)) {
            let p: Vec<Point<Q>> = raw.iter().map(|c| Point::from_i64s(c)).collect();
            prop_assume!(affine_dimension(&p) == 3);
            let facets = enumerate_facets(&p).unwrap();
            prop_assert!(facets.len() >= 4);
            for f in &facets {
                prop_assert!(p.iter().all(|x| f.contains(x)));
                let on = p.iter().filter(|x| f.slack(x).is_zero()).count();
                prop_assert!(on >= 3);
            }
        }

        #[test]
        fn caratheodory_support_is_small(raw in prop::collection::vec(prop::collection::vec(-9i64..9, 5), 6..14), w in prop::collection::vec(1i64..5, 14)) {
            let p: Vec<Point<Q>> = raw.iter().map(|c| Point::from_i64s(c)).collect();
            let total: i64 = w[..p.len()].iter().sum();
            let qpt: Vec<Q> = (0..5)
                .map(|j| p.iter().zip(&w).map(|(x, &wi)| x[j].clone() * Q::from_i64(wi)).sum::<Q>() / Q::from_i64(total))
                .collect();
            let b = caratheodory_basis(&qpt, &p).unwrap();
            prop_assert!(b.len() <= 6);
            let sub: Vec<Point<Q>> = b.iter().map(|(i, _)| p[*i].clone()).collect();
            prop_assert!(point_in_hull(&qpt, &sub, false).inside);
        }
    }
}
