//! Deep interior points of halfspace intersections and infeasibility
//! certificates.

use crate::geometry::{dot, Inequality, Point};
use crate::scalar::{dyadic_round, Scalar};

use super::lp::{lex_min_in_box, LpBox};
use super::simplex::nonneg_combination;

#[derive(Clone, Debug, PartialEq)]
pub enum InteriorPoint<S> {
    /// A feasible point maximizing the smallest slack scaled by `|a|_1`;
    /// `margin` is zero when the intersection is flat.
    Feasible { point: Point<S>, margin: S },
    /// `sum w_i a_i = 0` and `sum w_i b_i < 0` with `w >= 0`.
    Infeasible { multipliers: Vec<(usize, S)> },
}

/// Farkas multipliers proving `{x : <a_i, x> <= b_i}` empty, if it is.
pub fn infeasibility_certificate<S: Scalar>(ineqs: &[Inequality<S>]) -> Option<Vec<(usize, S)>> {
    let d = ineqs.first()?.dim();
    let columns: Vec<Vec<S>> = ineqs
        .iter()
        .map(|h| {
            let mut c = h.a.clone();
            c.push(h.b.clone());
            c
        })
        .collect();
    let mut target = vec![S::zero(); d];
    target.push(-S::one());
    nonneg_combination(&columns, &target)
}

/// Chebyshev-style center of `ineqs`, searched near `hint`.
///
/// In exact mode the point is rounded to a short dyadic rational that keeps
/// at least half of the optimal margin.
pub fn deep_interior_point<S: Scalar>(ineqs: &[Inequality<S>], dim: usize, hint: Option<&[S]>) -> InteriorPoint<S> {
    if let Some(multipliers) = infeasibility_certificate(ineqs) {
        return InteriorPoint::Infeasible { multipliers };
    }
    let center: Vec<S> = hint.map(|h| h.to_vec()).unwrap_or_else(|| vec![S::zero(); dim]);
    let scale = ineqs
        .iter()
        .flat_map(|h| h.a.iter().chain(std::iter::once(&h.b)))
        .chain(center.iter())
        .map(|v| v.to_f64().abs())
        .fold(1.0, f64::max);
    let mut radius = if S::EXACT { S::from_i64((scale.min(1e12).ceil() as i64).max(1) * 4) } else { S::from_f64(scale * 4.0) };

    let norms: Vec<S> = ineqs.iter().map(|h| h.a.iter().fold(S::zero(), |acc, c| acc + c.abs())).collect();
    // Variables (x, t): <a, x> + |a|_1 t <= b, t <= cap; minimize -t.
    let mut objective = vec![S::zero(); dim + 1];
    objective[dim] = -S::one();
    for _ in 0..12 {
        let mut cons: Vec<Inequality<S>> = ineqs
            .iter()
            .zip(&norms)
            .map(|(h, n)| {
                let mut a = h.a.clone();
                a.push(n.clone());
                Inequality::new(a, h.b.clone())
            })
            .collect();
        let mut cap = vec![S::zero(); dim + 1];
        cap[dim] = S::one();
        cons.push(Inequality::new(cap, radius.clone()));
        let mut bcenter = center.clone();
        bcenter.push(S::zero());
        let bbox = LpBox { center: bcenter, radius: radius.clone() * S::from_i64(2) };
        if let Some((x, _)) = lex_min_in_box(&objective, &cons, 0x5eed, &bbox) {
            let t = x[dim].clone();
            if !t.is_negative() {
                let point: Vec<S> = x[..dim].to_vec();
                if t.is_zero() {
                    return InteriorPoint::Feasible { point: Point::new(point), margin: S::zero() };
                }
                let point = if S::EXACT { round_keeping_margin(ineqs, &norms, point, &t) } else { point };
                let margin = scaled_margin(ineqs, &norms, &point);
                return InteriorPoint::Feasible { point: Point::new(point), margin };
            }
        }
        radius = radius * S::from_i64(16);
    }
    // The intersection is nonempty (no Farkas certificate) yet far away.
    InteriorPoint::Feasible { point: Point::new(center), margin: S::zero() }
}

fn scaled_margin<S: Scalar>(ineqs: &[Inequality<S>], norms: &[S], x: &[S]) -> S {
    let mut best: Option<S> = None;
    for (h, n) in ineqs.iter().zip(norms) {
        if n.is_exact_zero() {
            continue;
        }
        let v = h.slack(x) / n;
        best = Some(match best {
            None => v,
            Some(b) => b.min_s(v),
        });
    }
    best.unwrap_or_else(S::zero)
}

fn round_keeping_margin<S: Scalar>(ineqs: &[Inequality<S>], norms: &[S], x: Vec<S>, t: &S) -> Vec<S> {
    let half = t.half();
    let mut bits = 4;
    while bits <= 256 {
        let r: Vec<S> = x.iter().map(|v| S::from_ratio(&dyadic_round(&v.to_ratio(), bits))).collect();
        let ok = ineqs
            .iter()
            .zip(norms)
            .all(|(h, n)| (h.slack(&r) - n.clone() * &half).sign() != std::cmp::Ordering::Less);
        if ok {
            return r;
        }
        bits *= 2;
    }
    x
}

/// Slack of each inequality at `x`.
pub fn slacks<S: Scalar>(ineqs: &[Inequality<S>], x: &[S]) -> Vec<S> {
    ineqs.iter().map(|h| h.b.clone() - dot(&h.a, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Float, Rational};

    type Q = Rational;

    fn q(s: &str) -> Q {
        parse_rational(s).unwrap()
    }

    fn leq(a: &[i64], b: i64) -> Inequality<Q> {
        Inequality::new(a.iter().map(|&v| Q::from_i64(v)).collect(), Q::from_i64(b))
    }

    fn unit_square() -> Vec<Inequality<Q>> {
        vec![leq(&[1, 0], 1), leq(&[-1, 0], 1), leq(&[0, 1], 1), leq(&[0, -1], 1)]
    }

    #[test]
    fn square_center() {
        match deep_interior_point(&unit_square(), 2, None) {
            InteriorPoint::Feasible { point, margin } => {
                assert_eq!(point.coords(), &[q("0"), q("0")]);
                assert_eq!(margin, q("1"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn flat_intersection() {
        let h = vec![leq(&[1, 0], 1), leq(&[-1, 0], -1)];
        match deep_interior_point(&h, 2, None) {
            InteriorPoint::Feasible { point, margin } => {
                assert_eq!(point[0], q("1"));
                assert_eq!(margin, q("0"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_pair() {
        let h = vec![leq(&[1, 0], 0), leq(&[-1, 0], -1)];
        match deep_interior_point(&h, 2, None) {
            InteriorPoint::Infeasible { multipliers } => {
                let mut a = vec![q("0"); 2];
                let mut b = q("0");
                for (i, w) in &multipliers {
                    assert!(w > &q("0"));
                    for j in 0..2 {
                        a[j] = a[j].clone() + w.clone() * &h[*i].a[j];
                    }
                    b = b + w.clone() * &h[*i].b;
                }
                assert_eq!(a, vec![q("0"), q("0")]);
                assert!(b < q("0"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn far_away_region_and_rounding() {
        // Thin triangle far from the origin.
        let h = vec![leq(&[-3, 0], -3000), leq(&[1, 1], 1010), leq(&[0, -7], 0)];
        match deep_interior_point(&h, 2, None) {
            InteriorPoint::Feasible { point, margin } => {
                assert!(margin > q("0"));
                assert!(h.iter().all(|c| c.strictly_contains(&point)));
                assert!(point.iter().all(|c| c.denom().magnitude().count_ones() == 1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn float_square() {
        let h: Vec<Inequality<Float>> = unit_square().iter().map(|c| c.convert()).collect();
        match deep_interior_point(&h, 2, None) {
            InteriorPoint::Feasible { point, margin } => {
                assert!(point.iter().all(|c| c.0.abs() < 1e-9));
                assert!((margin.0 - 1.0).abs() < 1e-9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
