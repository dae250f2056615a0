//! Dense Gauss-Jordan elimination over a [`Scalar`].

use crate::scalar::Scalar;

/// Solution set `{particular + N t}` of a linear system.
#[derive(Clone, Debug)]
pub struct AffineSolution<S> {
    pub particular: Vec<S>,
    /// Columns spanning the null space, each of length `ncols`.
    pub null_basis: Vec<Vec<S>>,
}

/// Solves `A x = b` for `A` given by rows; `None` when inconsistent.
pub fn solve_affine<S: Scalar>(rows: &[Vec<S>], rhs: &[S], ncols: usize) -> Option<AffineSolution<S>> {
    solve_affine_with(rows, rhs, ncols, true)
}

/// Like [`solve_affine`] for systems consistent by construction: residual
/// rows left by round-off are ignored.
pub fn solve_consistent<S: Scalar>(rows: &[Vec<S>], rhs: &[S], ncols: usize) -> AffineSolution<S> {
    solve_affine_with(rows, rhs, ncols, false).expect("unchecked solve always succeeds")
}

fn solve_affine_with<S: Scalar>(rows: &[Vec<S>], rhs: &[S], ncols: usize, check: bool) -> Option<AffineSolution<S>> {
    debug_assert_eq!(rows.len(), rhs.len());
    let mut m: Vec<Vec<S>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = rref(&mut m, ncols);

    // Rows below the rank must have a zero right-hand side.
    for row in m.iter().skip(pivots.len()) {
        if check && !row[ncols].is_zero() {
            return None;
        }
    }

    let mut particular = vec![S::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = m[r][ncols].clone();
    }

    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut null_basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![S::zero(); ncols];
        v[free] = S::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -m[r][free].clone();
        }
        null_basis.push(v);
    }
    Some(AffineSolution { particular, null_basis })
}

/// Reduced row echelon form in place over the first `ncols` columns.
/// Returns the pivot column of each leading row.
pub fn rref<S: Scalar>(m: &mut [Vec<S>], ncols: usize) -> Vec<usize> {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = pick_pivot(m, r, c) else { continue };
        m.swap(r, p);
        let inv = S::one() / &m[r][c];
        for v in m[r].iter_mut() {
            *v = v.clone() * &inv;
        }
        m[r][c] = S::one();
        for i in 0..nrows {
            if i == r || m[i][c].is_exact_zero() {
                continue;
            }
            let f = m[i][c].clone();
            let (src, dst) = if i < r {
                let (a, b) = m.split_at_mut(r);
                (&b[0], &mut a[i])
            } else {
                let (a, b) = m.split_at_mut(i);
                (&a[r], &mut b[0])
            };
            for (k, v) in dst.iter_mut().enumerate() {
                if !src[k].is_exact_zero() {
                    *v = v.clone() - f.clone() * &src[k];
                }
            }
            dst[c] = S::zero();
        }
        pivots.push(c);
        r += 1;
    }
    if !S::EXACT {
        // Flush entries that elimination left at round-off level.
        for row in m.iter_mut() {
            for v in row.iter_mut() {
                if v.is_zero() {
                    *v = S::zero();
                }
            }
        }
    }
    pivots
}

fn pick_pivot<S: Scalar>(m: &[Vec<S>], from: usize, c: usize) -> Option<usize> {
    if S::EXACT {
        (from..m.len()).find(|&i| !m[i][c].is_exact_zero())
    } else {
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in m.iter().enumerate().skip(from) {
            let mag = row[c].to_f64().abs();
            if best.map_or(true, |(_, b)| mag > b) {
                best = Some((i, mag));
            }
        }
        best.filter(|&(i, _)| !m[i][c].is_zero()).map(|(i, _)| i)
    }
}

/// Unique solution of a square system, if the matrix is nonsingular.
pub fn solve_unique<S: Scalar>(rows: &[Vec<S>], rhs: &[S]) -> Option<Vec<S>> {
    let n = rows.len();
    let sol = solve_affine(rows, rhs, n)?;
    sol.null_basis.is_empty().then_some(sol.particular)
}

/// Rank of a set of vectors.
pub fn rank<S: Scalar>(vectors: &[Vec<S>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let ncols = vectors[0].len();
    let mut m = vectors.to_vec();
    rref(&mut m, ncols).len()
}

/// `M^T M` for `M` given by rows (result is `ncols x ncols`).
pub fn gram<S: Scalar>(cols: &[Vec<S>]) -> Vec<Vec<S>> {
    let k = cols.len();
    let mut g = vec![vec![S::zero(); k]; k];
    for i in 0..k {
        for j in i..k {
            let v = crate::geometry::dot(&cols[i], &cols[j]);
            g[j][i] = v.clone();
            g[i][j] = v;
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Float, Rational};

    fn qv(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| parse_rational(s).unwrap()).collect()
    }

    #[test]
    fn unique_solution() {
        let rows = vec![qv(&["2", "1"]), qv(&["1", "3"])];
        let x = solve_unique(&rows, &qv(&["3", "5"])).unwrap();
        assert_eq!(x, qv(&["4/5", "7/5"]));
    }

    #[test]
    fn null_space_and_inconsistency() {
        let rows = vec![qv(&["1", "1", "0"]), qv(&["2", "2", "0"])];
        let sol = solve_affine(&rows, &qv(&["1", "2"]), 3).unwrap();
        assert_eq!(sol.null_basis.len(), 2);
        for n in &sol.null_basis {
            assert_eq!(crate::geometry::dot(&rows[0], n), parse_rational("0").unwrap());
        }
        assert!(solve_affine(&rows, &qv(&["1", "3"]), 3).is_none());
    }

    #[test]
    fn float_pivoting() {
        let rows = vec![vec![Float(1e-14), Float(1.0)], vec![Float(1.0), Float(1.0)]];
        let x = solve_unique(&rows, &[Float(1.0), Float(2.0)]).unwrap();
        assert!((x[0].0 - 1.0).abs() < 1e-12 && (x[1].0 - 1.0).abs() < 1e-12);
        assert_eq!(rank(&[vec![Float(1.0), Float(2.0)], vec![Float(2.0), Float(4.0)]]), 1);
    }
}
