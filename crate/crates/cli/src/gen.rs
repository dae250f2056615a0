//! Seeded instance generators with known answers.

use std::fmt;
use std::str::FromStr;

use acit_core::{Inequality, Point, Rational, Scalar};
use anyhow::{bail, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{rational_strings, HalfspaceSpec, InstanceFile, Metadata, Sense};

/// Coordinates are multiples of `1 / GRID`.
const GRID: i64 = 1000;
const TOUCH_GAP: i64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Disjoint,
    Intersecting,
    TouchingAdversarial,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::Disjoint, Kind::Intersecting, Kind::TouchingAdversarial];

    pub fn expected(self) -> &'static str {
        match self {
            Kind::Intersecting => "intersect",
            _ => "disjoint",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Disjoint => "disjoint",
            Kind::Intersecting => "intersecting",
            Kind::TouchingAdversarial => "touching-adversarial",
        })
    }
}

impl FromStr for Kind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "disjoint" => Kind::Disjoint,
            "intersecting" => Kind::Intersecting,
            "touching-adversarial" | "touching" => Kind::TouchingAdversarial,
            other => bail!("unknown instance kind {other:?}"),
        })
    }
}

/// A generated instance; every halfspace is `<a, x> <= b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Generated {
    pub d: usize,
    pub kind: Kind,
    pub seed: u64,
    pub points: Vec<Vec<Rational>>,
    pub halfspaces: Vec<(Vec<Rational>, Rational)>,
}

impl Generated {
    pub fn points<S: Scalar>(&self) -> Vec<Point<S>> {
        self.points.iter().map(|p| Point::new(p.iter().map(S::from_ratio).collect())).collect()
    }

    pub fn inequalities<S: Scalar>(&self) -> Vec<Inequality<S>> {
        self.halfspaces
            .iter()
            .map(|(a, b)| Inequality::new(a.iter().map(S::from_ratio).collect(), S::from_ratio(b)))
            .collect()
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            d: self.d,
            points: self.points.iter().map(|p| rational_strings(p)).collect(),
            halfspaces: self
                .halfspaces
                .iter()
                .map(|(a, b)| HalfspaceSpec {
                    normal: rational_strings(a),
                    offset: rational_strings(std::slice::from_ref(b)).remove(0),
                    sense: Sense::Leq,
                })
                .collect(),
            metadata: Metadata {
                seed: Some(self.seed),
                kind: Some(self.kind.to_string()),
                expected: Some(self.kind.expected().to_string()),
            },
        }
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn qi(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(qi(0), |acc, (x, y)| acc + x * y)
}

fn in_ball(rng: &mut ChaCha8Rng, d: usize, radius: i64) -> Vec<Rational> {
    let r = radius * GRID;
    loop {
        let c: Vec<i64> = (0..d).map(|_| rng.gen_range(-r..=r)).collect();
        if c.iter().map(|v| v * v).sum::<i64>() <= r * r {
            return c.into_iter().map(|v| q(v, GRID)).collect();
        }
    }
}

fn direction(rng: &mut ChaCha8Rng, d: usize) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..d).map(|_| rng.gen_range(-9..=9)).collect();
        if v.iter().any(|&c| c != 0) {
            return v;
        }
    }
}

fn norm(v: &[i64]) -> f64 {
    (v.iter().map(|c| (c * c) as f64).sum::<f64>()).sqrt()
}

/// `<v, x> <= b` containing the ball of radius `r` around `center`,
/// within `2 / GRID` of tangent.
fn tangent(v: &[i64], center: &[Rational], r: i64) -> (Vec<Rational>, Rational) {
    let a: Vec<Rational> = v.iter().map(|&c| qi(c)).collect();
    let reach = ((r as f64) * norm(v) * GRID as f64).ceil() as i64 + 1;
    let b = dot(&a, center) + q(reach, GRID);
    (a, b)
}

/// Generates an instance of `kind` with `n` points and `m` halfspaces in dimension `d`.
pub fn generate(kind: Kind, d: usize, n: usize, m: usize, seed: u64) -> Result<Generated> {
    if d < 2 {
        bail!("dimension must be at least 2");
    }
    if n < d + 1 || m < d + 1 {
        bail!("need at least d + 1 points and halfspaces (d = {d}, n = {n}, m = {m})");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((d as u64) << 48));
    let r1 = rng.gen_range(1..=4);
    let r2 = rng.gen_range(1..=4);
    let mut points: Vec<Vec<Rational>> = (0..n).map(|_| in_ball(&mut rng, d, r1)).collect();
    let mut halfspaces = Vec::with_capacity(m);
    match kind {
        Kind::Disjoint | Kind::TouchingAdversarial => {
            let c2 = in_ball(&mut rng, d, 5);
            let u = direction(&mut rng, d);
            let (ua, ub) = tangent(&u, &c2, r2);
            // Distance from the hull to the separating halfspace is gap / |u|.
            let unorm = norm(&u).ceil() as i64;
            let gap = match kind {
                Kind::TouchingAdversarial => q(unorm, TOUCH_GAP),
                _ => q(rng.gen_range(2..=12) * unorm, 4),
            };
            let low = points.iter().map(|p| dot(&ua, p)).min().expect("n > 0");
            let shift = (ub.clone() + gap - low) / dot(&ua, &ua);
            for p in points.iter_mut() {
                for (c, a) in p.iter_mut().zip(&ua) {
                    *c = c.clone() + shift.clone() * a;
                }
            }
            let slot = rng.gen_range(0..m);
            for i in 0..m {
                if i == slot {
                    halfspaces.push((ua.clone(), ub.clone()));
                } else {
                    halfspaces.push(tangent(&direction(&mut rng, d), &c2, r2));
                }
            }
        }
        Kind::Intersecting => {
            // Plant x as a convex combination of d of the points.
            let mut x = vec![qi(0); d];
            let mut total = 0i64;
            let picks: Vec<(usize, i64)> = (0..d).map(|_| (rng.gen_range(0..n), rng.gen_range(1..=9))).collect();
            for &(i, w) in &picks {
                total += w;
                for j in 0..d {
                    x[j] = x[j].clone() + qi(w) * &points[i][j];
                }
            }
            for c in x.iter_mut() {
                *c = c.clone() / qi(total);
            }
            // Center the halfspace ball up to r2/2 away from x, leaning outward.
            let mut u = direction(&mut rng, d);
            let centroid: Vec<Rational> =
                (0..d).map(|j| points.iter().fold(qi(0), |acc, p| acc + &p[j]) / qi(n as i64)).collect();
            let out: Vec<Rational> = x.iter().zip(&centroid).map(|(a, b)| a - b).collect();
            let ur: Vec<Rational> = u.iter().map(|&c| qi(c)).collect();
            if dot(&ur, &out) < qi(0) {
                u.iter_mut().for_each(|c| *c = -*c);
            }
            let l1: i64 = u.iter().map(|c| c.abs()).sum();
            let c2: Vec<Rational> = x.iter().zip(&u).map(|(xc, &uc)| xc + q(uc * r2, 2 * l1)).collect();
            for _ in 0..m {
                halfspaces.push(tangent(&direction(&mut rng, d), &c2, r2));
            }
        }
    }
    Ok(Generated { d, kind, seed, points, halfspaces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use acit_core::oracle::{oracle_decide, Decision};

    #[test]
    fn deterministic_per_seed() {
        let a = generate(Kind::Disjoint, 2, 10, 8, 42).unwrap().to_file().to_json();
        let b = generate(Kind::Disjoint, 2, 10, 8, 42).unwrap().to_file().to_json();
        assert_eq!(a, b);
        let c = generate(Kind::Disjoint, 2, 10, 8, 43).unwrap().to_file().to_json();
        assert_ne!(a, c);
    }

    #[test]
    fn kinds_have_their_answers() {
        for d in 2..=4 {
            for seed in 0..12 {
                for kind in Kind::ALL {
                    let g = generate(kind, d, 12, 10, seed).unwrap();
                    let got = oracle_decide(&g.points::<Rational>(), &g.inequalities()).unwrap();
                    let want = if kind == Kind::Intersecting { Decision::Intersect } else { Decision::Disjoint };
                    assert_eq!(got, want, "{kind} d={d} seed={seed}");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(generate(Kind::Disjoint, 1, 10, 10, 0).is_err());
        assert!(generate(Kind::Disjoint, 3, 3, 10, 0).is_err());
        assert!(generate(Kind::Intersecting, 3, 10, 2, 0).is_err());
        assert_eq!("touching-adversarial".parse::<Kind>().unwrap(), Kind::TouchingAdversarial);
    }
}
