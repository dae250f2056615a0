//! Phase-one simplex for `A mu = target, mu >= 0` with few rows.
//!
//! Returns a basic feasible solution, so the support never exceeds the
//! number of rows. Dantzig pricing with a switch to Bland's rule after a run
//! of degenerate pivots keeps it cycle-free.

use std::cmp::Ordering;

use crate::scalar::Scalar;

const DEGENERATE_RUN_BEFORE_BLAND: usize = 32;

/// Finds `mu >= 0` with `sum_j mu_j * columns[j] = target`.
///
/// Every column must have `target.len()` entries. The result lists the
/// positive entries of a basic solution as `(column, value)`.
pub fn nonneg_combination<S: Scalar>(columns: &[Vec<S>], target: &[S]) -> Option<Vec<(usize, S)>> {
    let rows = target.len();
    let n = columns.len();
    if rows == 0 {
        return Some(vec![]);
    }

    // Tableau rows: [A | I | rhs] with rows flipped so rhs >= 0.
    let width = n + rows;
    let mut t: Vec<Vec<S>> = Vec::with_capacity(rows);
    let mut rhs: Vec<S> = Vec::with_capacity(rows);
    for i in 0..rows {
        let flip = target[i].is_negative();
        let mut row = Vec::with_capacity(width);
        for col in columns {
            debug_assert_eq!(col.len(), rows);
            row.push(if flip { -col[i].clone() } else { col[i].clone() });
        }
        for k in 0..rows {
            row.push(if k == i { S::one() } else { S::zero() });
        }
        t.push(row);
        rhs.push(if flip { -target[i].clone() } else { target[i].clone() });
    }
    let mut basis: Vec<usize> = (n..width).collect();

    // Reduced costs for minimizing the sum of artificials.
    let mut cost = vec![S::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] = cost[j].clone() - &row[j];
        }
    }
    let mut objective = S::zero();
    for r in &rhs {
        objective = objective - r;
    }

    let mut degenerate_run = 0usize;
    let max_iter = 50 * (width + 10);
    for _ in 0..max_iter {
        let bland = degenerate_run >= DEGENERATE_RUN_BEFORE_BLAND;
        let Some(enter) = choose_entering(&cost, n, bland) else { break };

        let Some(leave) = ratio_test(&t, &rhs, &basis, enter) else {
            // Unbounded ray in phase one cannot happen; treat as stuck.
            break;
        };
        if rhs[leave].is_zero() {
            degenerate_run += 1;
        } else {
            degenerate_run = 0;
        }
        pivot(&mut t, &mut rhs, &mut cost, &mut objective, leave, enter);
        basis[leave] = enter;
    }

    // Feasible iff the artificial sum reached zero.
    if !objective.is_zero() {
        return None;
    }
    let mut support: Vec<(usize, S)> = basis
        .iter()
        .zip(&rhs)
        .filter(|(&b, v)| b < n && v.is_positive())
        .map(|(&b, v)| (b, v.clone()))
        .collect();
    support.sort_by_key(|(j, _)| *j);
    Some(support)
}

fn choose_entering<S: Scalar>(cost: &[S], n: usize, bland: bool) -> Option<usize> {
    if bland {
        return (0..n).find(|&j| cost[j].is_negative());
    }
    let mut best: Option<(usize, f64)> = None;
    for (j, c) in cost.iter().enumerate().take(n) {
        if !c.is_negative() {
            continue;
        }
        let v = c.to_f64();
        if best.map_or(true, |(_, b)| v < b) {
            best = Some((j, v));
        }
    }
    best.map(|(j, _)| j)
}

fn ratio_test<S: Scalar>(t: &[Vec<S>], rhs: &[S], basis: &[usize], enter: usize) -> Option<usize> {
    let mut best: Option<(usize, S)> = None;
    for i in 0..t.len() {
        let a = &t[i][enter];
        if !a.is_positive() {
            continue;
        }
        let ratio = rhs[i].clone() / a;
        best = match best {
            None => Some((i, ratio)),
            Some((bi, br)) => match ratio.cmp_s(&br) {
                Ordering::Less => Some((i, ratio)),
                Ordering::Equal if basis[i] < basis[bi] => Some((i, ratio)),
                _ => Some((bi, br)),
            },
        };
    }
    best.map(|(i, _)| i)
}

fn pivot<S: Scalar>(
    t: &mut [Vec<S>],
    rhs: &mut [S],
    cost: &mut [S],
    objective: &mut S,
    leave: usize,
    enter: usize,
) {
    let inv = S::one() / &t[leave][enter];
    for v in t[leave].iter_mut() {
        if !v.is_exact_zero() {
            *v = v.clone() * &inv;
        }
    }
    rhs[leave] = rhs[leave].clone() * &inv;
    let pivot_row = t[leave].clone();
    let pivot_rhs = rhs[leave].clone();
    for i in 0..t.len() {
        if i == leave {
            continue;
        }
        let f = t[i][enter].clone();
        if f.is_exact_zero() {
            continue;
        }
        for (v, p) in t[i].iter_mut().zip(&pivot_row) {
            if !p.is_exact_zero() {
                *v = v.clone() - f.clone() * p;
            }
        }
        t[i][enter] = S::zero();
        rhs[i] = rhs[i].clone() - f * &pivot_rhs;
        if !S::EXACT && rhs[i].to_f64() < 0.0 {
            rhs[i] = S::zero();
        }
    }
    let f = cost[enter].clone();
    if !f.is_exact_zero() {
        for (c, p) in cost.iter_mut().zip(&pivot_row) {
            if !p.is_exact_zero() {
                *c = c.clone() - f.clone() * p;
            }
        }
        cost[enter] = S::zero();
        *objective = objective.clone() - f * &pivot_rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Float, Rational};

    fn col(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_i64(x)).collect()
    }

    #[test]
    fn convex_combination_of_square() {
        // Columns (p, 1) for the square corners; target (0, 0, 1).
        let cols = vec![col(&[1, 1, 1]), col(&[1, -1, 1]), col(&[-1, 1, 1]), col(&[-1, -1, 1])];
        let sol = nonneg_combination(&cols, &col(&[0, 0, 1])).unwrap();
        assert!(sol.len() <= 3);
        let mut acc = vec![Rational::from_i64(0); 3];
        for (j, v) in &sol {
            for k in 0..3 {
                acc[k] = acc[k].clone() + v.clone() * &cols[*j][k];
            }
        }
        assert_eq!(acc, col(&[0, 0, 1]));
    }

    #[test]
    fn infeasible_combination() {
        let cols = vec![col(&[2, 0, 1]), col(&[3, 1, 1]), col(&[3, -1, 1])];
        assert!(nonneg_combination(&cols, &col(&[0, 0, 1])).is_none());
    }

    #[test]
    fn negative_target_rows() {
        let cols = vec![col(&[-1, 0]), col(&[0, -2])];
        let sol = nonneg_combination(&cols, &col(&[-3, -4])).unwrap();
        assert_eq!(sol, vec![(0, Rational::from_i64(3)), (1, Rational::from_i64(2))]);
    }

    #[test]
    fn float_version() {
        let cols = vec![vec![Float(1.0), Float(1.0)], vec![Float(-1.0), Float(1.0)]];
        let sol = nonneg_combination(&cols, &[Float(0.5), Float(1.0)]).unwrap();
        assert_eq!(sol.len(), 2);
        assert!((sol[0].1 .0 - 0.75).abs() < 1e-12);
    }
}
