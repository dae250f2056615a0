//! Fixed-dimension timing sweeps.

use std::time::Instant;

use acit_core::{solve, AcitParams, Float, Rational, Scalar};
use anyhow::Result;

use crate::gen::{generate, Kind};

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub d: usize,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub exact: bool,
    pub alpha_constant: Option<f64>,
    /// Fixed input family; `None` alternates disjoint and intersecting by trial.
    pub kind: Option<Kind>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub trial: usize,
    pub kind: Kind,
    pub seconds: f64,
    pub intersects: bool,
    pub depth: usize,
    pub recursive_calls: usize,
    pub base_cases: usize,
    pub max_loop: usize,
    pub fallback: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub slope: Option<f64>,
}

impl BenchReport {
    pub fn fallback_rate(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows.iter().filter(|r| r.fallback).count() as f64 / self.rows.len() as f64
    }

    /// Median wall time per size, in sweep order.
    pub fn medians(&self) -> Vec<(usize, f64)> {
        let mut sizes: Vec<usize> = self.rows.iter().map(|r| r.n).collect();
        sizes.dedup();
        sizes
            .into_iter()
            .map(|n| {
                let mut t: Vec<f64> = self.rows.iter().filter(|r| r.n == n).map(|r| r.seconds).collect();
                t.sort_by(f64::total_cmp);
                (n, median(&t))
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,m,trial,kind,seconds,decision,depth,recursive_calls,base_cases,max_loop,fallback\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{:.6},{},{},{},{},{},{}\n",
                r.n,
                r.m,
                r.trial,
                r.kind,
                r.seconds,
                if r.intersects { "intersect" } else { "disjoint" },
                r.depth,
                r.recursive_calls,
                r.base_cases,
                r.max_loop,
                r.fallback
            ));
        }
        out
    }
}

fn median(sorted: &[f64]) -> f64 {
    let k = sorted.len();
    if k % 2 == 1 {
        sorted[k / 2]
    } else {
        (sorted[k / 2 - 1] + sorted[k / 2]) / 2.0
    }
}

/// Least-squares slope of `ln y` against `ln x`; `None` for fewer than two sizes.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.max(1e-12).ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

fn one<S: Scalar>(cfg: &BenchConfig, n: usize, trial: usize) -> Result<BenchRow> {
    let kind = cfg.kind.unwrap_or(if trial % 2 == 0 { Kind::Disjoint } else { Kind::Intersecting });
    let seed = cfg.seed.wrapping_add((n as u64) << 20).wrapping_add(trial as u64);
    let g = generate(kind, cfg.d, n, n, seed)?;
    let points = g.points::<S>();
    let halfspaces = g.inequalities::<S>();
    let mut params = AcitParams::for_dimension(cfg.d, seed).with_invariant_checks(false);
    if let Some(c) = cfg.alpha_constant {
        params = params.with_alpha_constant(cfg.d, c);
    }
    let start = Instant::now();
    let sol = solve(&points, &halfspaces, &params)?;
    let seconds = start.elapsed().as_secs_f64();
    Ok(BenchRow {
        n,
        m: n,
        trial,
        kind,
        seconds,
        intersects: sol.certificate.intersects(),
        depth: sol.stats.depth_reached,
        recursive_calls: sol.stats.recursive_calls,
        base_cases: sol.stats.base_cases,
        max_loop: sol.stats.max_loop_length(),
        fallback: sol.stats.fallback,
    })
}

/// Runs `trials` solves per size with `n = m`, alternating disjoint and intersecting inputs.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    let mut rows = Vec::new();
    for &n in &cfg.sizes {
        for trial in 0..cfg.trials {
            rows.push(if cfg.exact { one::<Rational>(cfg, n, trial)? } else { one::<Float>(cfg, n, trial)? });
        }
    }
    let mut report = BenchReport { rows, slope: None };
    let med: Vec<(f64, f64)> = report.medians().into_iter().map(|(n, t)| (n as f64, t)).collect();
    report.slope = loglog_slope(&med);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [1000.0, 2000.0, 4000.0].iter().map(|&n: &f64| (n, 3e-6 * n.powf(1.5))).collect();
        assert!((loglog_slope(&pts).unwrap() - 1.5).abs() < 1e-9);
        assert_eq!(loglog_slope(&pts[..1]), None);
    }

    #[test]
    fn empty_and_single_size() {
        let cfg = BenchConfig { d: 2, sizes: vec![50], trials: 0, seed: 1, exact: false, alpha_constant: None, kind: None };
        let r = run_bench(&cfg).unwrap();
        assert!(r.rows.is_empty());
        assert_eq!(r.to_csv().lines().count(), 1);
        let cfg = BenchConfig { trials: 2, ..cfg };
        let r = run_bench(&cfg).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.slope, None);
    }
}
