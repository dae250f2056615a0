//! The recursive primal-dual test and the solve wrapper around it.
//!
//! `test` works in a frame where the origin is interior to `∩H` and both
//! inputs are valid: either `P` avoids the origin while `H` embraces it, or
//! the other way round. Each loop iteration recurses on the polar pair
//! `(H*, N*)` for a small net `N ⊆ P` and grows `N` by a conflict set until
//! none remains.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{dot, scale, sub, Inequality, Point, Side};
use crate::nets::{augment_for_interior, sample_net, theoretical_sample_size, NetParams};
use crate::polarity::{classify_point_set, Validity};
use crate::scalar::{Mode, Rational, Scalar};
use crate::smalllp::interior::slacks;
use crate::smalllp::linalg::solve_consistent;
use crate::smalllp::{
    closest_pair_vh_incremental, convex_coefficients, deep_interior_point,
    infeasibility_certificate, nonneg_combination, solve_lp_in_box, ClosestPair, InteriorPoint, LpBox, LpStatus, PairOutcome,
};

/// How many points the initial net of a level draws from `n` candidates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SampleRule {
    /// The fixed ε-net bound for `ε = 1/d^4`.
    Theoretical,
    /// `ceil(factor * sqrt(d * n))`.
    Sqrt { factor: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AcitParams {
    pub alpha: usize,
    pub eps: Rational,
    pub net: NetParams,
    pub sample_rule: SampleRule,
    pub seed: u64,
    /// Re-classify inputs at every recursion entry and assert the progress lemmas.
    pub check_invariants: bool,
}

/// Largest input the wrapper will hand to the direct solver after a numeric failure.
/// Relative slack for the closest-pair optimality checks on float certificates.
pub const FLOAT_OPTIMALITY_TOL: f64 = 1e-7;

pub const DIRECT_LIMIT: usize = 64;

/// Constant `c` in the base-case threshold.
pub const DEFAULT_ALPHA_CONSTANT: f64 = 1.0;

pub const DEFAULT_SAMPLE_RULE: SampleRule = SampleRule::Theoretical;

impl AcitParams {
    pub fn for_dimension(d: usize, seed: u64) -> Self {
        let net = NetParams::for_dimension(d, seed);
        AcitParams {
            alpha: alpha_for(d, DEFAULT_ALPHA_CONSTANT),
            eps: net.eps.clone(),
            net,
            sample_rule: DEFAULT_SAMPLE_RULE,
            seed,
            check_invariants: cfg!(debug_assertions),
        }
    }

    /// Base-case threshold `max(16, ceil(c d^4 log2(d + 1)))`.
    pub fn with_alpha_constant(mut self, d: usize, c: f64) -> Self {
        self.alpha = alpha_for(d, c);
        self
    }

    pub fn with_sample_rule(mut self, rule: SampleRule) -> Self {
        self.sample_rule = rule;
        self
    }

    pub fn with_invariant_checks(mut self, on: bool) -> Self {
        self.check_invariants = on;
        self
    }

    fn sample_size(&self, d: usize, n: usize) -> usize {
        match self.sample_rule {
            SampleRule::Theoretical => theoretical_sample_size(d, 1.0 / 16.0),
            SampleRule::Sqrt { factor } => ((factor * ((d * n) as f64).sqrt()).ceil() as usize).max(d + 1),
        }
    }
}

pub fn alpha_for(d: usize, c: f64) -> usize {
    let d = d as f64;
    let a = (c * d.powi(4) * (d + 1.0).log2()).ceil();
    (a.max(16.0)) as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    /// The polar pair was disjoint; conflicts come from `P*`.
    Polar,
    /// The polar pair intersected; conflicts come from `P ∩ H_y`.
    Primal,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseTag::Polar => write!(f, "1"),
            CaseTag::Primal => write!(f, "2"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LoopRecord {
    pub depth: usize,
    pub points: usize,
    pub halfspaces: usize,
    pub net_size: usize,
    pub tags: Vec<CaseTag>,
    pub conflict_sizes: Vec<usize>,
}

impl LoopRecord {
    pub fn tag_string(&self) -> String {
        self.tags.iter().map(|t| t.to_string()).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveStats {
    pub depth_reached: usize,
    pub recursive_calls: usize,
    pub base_cases: usize,
    /// Set when a loop's net grew past half of its point set.
    pub fallback: bool,
    pub fallback_count: usize,
    /// Levels whose first sample would not have been smaller than half the set.
    pub direct_solves: usize,
    /// The input was routed through the direct solver for lack of general position.
    pub degenerate: bool,
    /// A float certificate failed its check and was recomputed exactly.
    pub exact_retry: bool,
    pub loops: Vec<LoopRecord>,
}

impl SolveStats {
    pub fn max_loop_length(&self) -> usize {
        self.loops.iter().map(|l| l.tags.len()).max().unwrap_or(0)
    }
}

/// Per-call state: the translation to the working frame, the numeric mode,
/// the seeded generator and the statistics being collected.
pub struct SolveContext<S> {
    pub translation: Vec<S>,
    pub mode: Mode,
    pub depth: usize,
    pub stats: SolveStats,
    params: AcitParams,
    rng: ChaCha8Rng,
}

impl<S: Scalar> SolveContext<S> {
    pub fn new(params: &AcitParams, translation: Vec<S>) -> Self {
        SolveContext {
            translation,
            mode: S::MODE,
            depth: 0,
            stats: SolveStats::default(),
            params: params.clone(),
            rng: ChaCha8Rng::seed_from_u64(params.seed),
        }
    }

    pub fn params(&self) -> &AcitParams {
        &self.params
    }

    fn next_seed(&mut self) -> u64 {
        self.rng.gen()
    }
}

/// Result of [`test`].
#[derive(Clone, Debug, PartialEq)]
pub enum TestOutcome<S> {
    /// `x` in `∩H`, `y` in `conv(P)`: the closest pair of the primal sets.
    Disjoint(ClosestPair<S>),
    /// `x` in `∩(P*)`, `y` in `conv(H*)`: the closest pair of the polar sets.
    Intersect(ClosestPair<S>),
}

/// Decides whether `conv(points)` meets the intersection of the halfspaces
/// with normals `normals`.
///
/// With `p_embracing` the points embrace the origin and the halfspaces are
/// far-side; otherwise the points avoid the origin and the halfspaces are
/// origin-side.
pub fn test<S: Scalar>(
    points: &[Point<S>],
    normals: &[Point<S>],
    p_embracing: bool,
    ctx: &mut SolveContext<S>,
) -> Result<TestOutcome<S>> {
    ctx.stats.recursive_calls += 1;
    ctx.stats.depth_reached = ctx.stats.depth_reached.max(ctx.depth);
    if ctx.params.check_invariants {
        check_precondition(points, normals, p_embracing)?;
    }
    let d = points[0].dim();
    let n = points.len();
    let alpha = ctx.params.alpha;
    if n <= alpha && normals.len() <= alpha {
        return base_case(points, normals, p_embracing, ctx);
    }

    let mut net: Vec<usize> = if n <= alpha {
        (0..n).collect()
    } else {
        let size = ctx.params.sample_size(d, n);
        if 2 * size >= n {
            ctx.stats.direct_solves += 1;
            return base_case(points, normals, p_embracing, ctx);
        }
        let params = ctx.params.net.clone().with_sample_size(size);
        let params = NetParams { seed: ctx.next_seed(), ..params };
        sample_net(points, &params)
    };
    if p_embracing {
        net = augment_for_interior(points, &net);
    }

    let mut in_net = vec![false; n];
    for &i in &net {
        in_net[i] = true;
    }
    let star_side = if p_embracing { Side::OriginSide } else { Side::FarSide };
    let mut record = LoopRecord {
        depth: ctx.depth,
        points: n,
        halfspaces: normals.len(),
        net_size: net.len(),
        ..LoopRecord::default()
    };
    let mut last_dist: Option<S> = None;
    for _ in 0..2 * d + 1 {
        if n > alpha && 2 * net.len() > n {
            ctx.stats.fallback = true;
            ctx.stats.fallback_count += 1;
            ctx.stats.loops.push(record);
            return base_case(points, normals, p_embracing, ctx);
        }
        let net_points: Vec<Point<S>> = net.iter().map(|&i| points[i].clone()).collect();
        ctx.depth += 1;
        let inner = test(normals, &net_points, !p_embracing, ctx);
        ctx.depth -= 1;
        let (tag, pair, conflicts) = match inner? {
            TestOutcome::Disjoint(pair) => {
                // pair.x lies in ∩(N*); look for halfspaces of P* missing it.
                let conflicts: Vec<usize> = (0..n)
                    .filter(|&i| !in_net[i] && !star_contains(&points[i], &pair.x, star_side))
                    .collect();
                (CaseTag::Polar, pair, conflicts)
            }
            TestOutcome::Intersect(pair) => {
                // pair.x lies in ∩H, pair.y in conv(N); H_y is the open side of
                // the bisecting normal plane through y that faces x.
                let dir = sub(&pair.y, &pair.x);
                let conflicts: Vec<usize> = (0..n)
                    .filter(|&i| !in_net[i] && dot(&dir, &sub(&points[i], &pair.y)).is_negative())
                    .collect();
                (CaseTag::Primal, pair, conflicts)
            }
        };

        if ctx.params.check_invariants {
            check_progress(&record, tag, &pair.dist2, last_dist.as_ref())?;
        }
        record.tags.push(tag);
        record.conflict_sizes.push(conflicts.len());
        if conflicts.is_empty() {
            ctx.stats.loops.push(record);
            return Ok(match tag {
                CaseTag::Polar => TestOutcome::Intersect(pair),
                CaseTag::Primal => TestOutcome::Disjoint(pair),
            });
        }
        last_dist = Some(pair.dist2);
        for i in conflicts {
            in_net[i] = true;
            net.push(i);
        }
        net.sort_unstable();
    }
    let log = format!("depth {} tags {} conflicts {:?}", record.depth, record.tag_string(), record.conflict_sizes);
    Err(Error::LoopExhausted { iterations: 2 * d + 1, log })
}

fn star_contains<S: Scalar>(p: &Point<S>, x: &[S], side: Side) -> bool {
    let e = p.dot(x) - S::one();
    match side {
        Side::OriginSide => !e.is_positive(),
        Side::FarSide => !e.is_negative(),
    }
}

fn check_progress<S: Scalar>(record: &LoopRecord, tag: CaseTag, dist2: &S, last: Option<&S>) -> Result<()> {
    let fail = |what: &str| {
        Err(Error::InvariantViolation(format!(
            "{what} at depth {} after tags {}",
            record.depth,
            record.tag_string()
        )))
    };
    if tag == CaseTag::Primal && record.tags.contains(&CaseTag::Polar) {
        return fail("primal case after polar case");
    }
    if !S::EXACT {
        return Ok(());
    }
    if let (Some(prev_tag), Some(prev)) = (record.tags.last(), last) {
        if *prev_tag == tag {
            let ord = dist2.cmp_s(prev);
            match tag {
                CaseTag::Primal if ord != std::cmp::Ordering::Less => return fail("primal distance did not decrease"),
                CaseTag::Polar if ord != std::cmp::Ordering::Greater => return fail("polar distance did not increase"),
                _ => {}
            }
        }
    }
    Ok(())
}

fn check_precondition<S: Scalar>(points: &[Point<S>], normals: &[Point<S>], p_embracing: bool) -> Result<()> {
    let expected = if p_embracing { Validity::Embracing } else { Validity::Avoiding };
    let got = classify_point_set(points)?;
    if got != expected {
        return Err(Error::InvariantViolation(format!("point set is {got:?}, expected {expected:?}")));
    }
    if p_embracing {
        let ineqs = halfspace_ineqs(normals, Side::FarSide);
        if infeasibility_certificate(&ineqs).is_some() {
            return Err(Error::InvariantViolation("far-side halfspaces have empty intersection".into()));
        }
    }
    Ok(())
}

fn halfspace_ineqs<S: Scalar>(normals: &[Point<S>], side: Side) -> Vec<Inequality<S>> {
    normals
        .iter()
        .map(|z| match side {
            Side::OriginSide => Inequality::new(z.coords().to_vec(), S::one()),
            Side::FarSide => Inequality::new(z.iter().map(|c| -c.clone()).collect(), -S::one()),
        })
        .collect()
}

fn base_case<S: Scalar>(
    points: &[Point<S>],
    normals: &[Point<S>],
    p_embracing: bool,
    ctx: &mut SolveContext<S>,
) -> Result<TestOutcome<S>> {
    ctx.stats.base_cases += 1;
    let (h_side, star_side) = if p_embracing {
        (Side::FarSide, Side::OriginSide)
    } else {
        (Side::OriginSide, Side::FarSide)
    };
    let seed = ctx.next_seed();
    let h = halfspace_ineqs(normals, h_side);
    let primal = match closest_pair_vh_incremental(points, &h, seed)?.outcome {
        PairOutcome::Disjoint(pair) => return Ok(TestOutcome::Disjoint(pair)),
        PairOutcome::Intersecting(pair) => pair,
    };
    let pstar = halfspace_ineqs(points, star_side);
    match closest_pair_vh_incremental(normals, &pstar, seed)?.outcome {
        PairOutcome::Disjoint(pair) => Ok(TestOutcome::Intersect(pair)),
        PairOutcome::Intersecting(_) => {
            // Both sides only touch: the primal contact point answers.
            ctx.stats.degenerate = true;
            Ok(TestOutcome::Disjoint(primal))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate<S> {
    /// `point` lies in `conv(P)` (via `coefficients`) and in every halfspace.
    Witness { point: Point<S>, coefficients: Vec<(usize, S)>, slacks: Vec<S> },
    /// `<normal, p> > offset` on `P` and `<normal, x> < offset` on `∩H`;
    /// `pair` is the closest pair with `x` in `∩H` and `y` in `conv(P)`.
    Separator {
        normal: Vec<S>,
        offset: S,
        pair: ClosestPair<S>,
        y_coefficients: Vec<(usize, S)>,
        distance: f64,
    },
    /// Farkas multipliers: `sum w_i a_i = 0`, `sum w_i b_i < 0`.
    EmptyH { multipliers: Vec<(usize, S)> },
}

impl<S: Scalar> Certificate<S> {
    pub fn intersects(&self) -> bool {
        matches!(self, Certificate::Witness { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Witness { .. } => "witness",
            Certificate::Separator { .. } => "separator",
            Certificate::EmptyH { .. } => "empty_h",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution<S> {
    pub certificate: Certificate<S>,
    pub stats: SolveStats,
}

/// Turns a [`test`] outcome in the working frame into a certificate in the
/// original frame. `points` are the translated points.
pub fn make_certificate<S: Scalar>(
    outcome: TestOutcome<S>,
    points: &[Point<S>],
    halfspaces: &[Inequality<S>],
    ctx: &SolveContext<S>,
) -> Result<Certificate<S>> {
    let c = &ctx.translation;
    match outcome {
        TestOutcome::Disjoint(pair) => {
            let y_coefficients = convex_coefficients(&pair.y, points).ok_or_else(|| lost("closest point"))?;
            let x = Point::new(pair.x.add(c).into_coords());
            let y = Point::new(pair.y.add(c).into_coords());
            if pair.is_touching() {
                return Ok(witness(x.into_coords(), y_coefficients, halfspaces));
            }
            Ok(separator(ClosestPair::new(x, y), y_coefficients))
        }
        TestOutcome::Intersect(pair) => {
            let nrm = sub(&pair.x, &pair.y);
            let mid = pair.x.midpoint(&pair.y);
            let mut delta = dot(&nrm, &mid);
            if delta.is_zero() {
                let quarter = crate::geometry::lerp(&pair.y, &pair.x, &S::from_ratio(&Rational::new(1.into(), 4.into())));
                delta = dot(&nrm, &quarter);
            }
            if delta.is_exact_zero() {
                return Err(Error::InvariantViolation("polar separator passes through the origin".into()));
            }
            let w = scale(&nrm, &(S::one() / delta));
            let (w, coefficients) = pull_into_hull(&w, points)
                .or_else(|| tight_cone_point(&nrm, &pair.x, points))
                .ok_or_else(|| lost("polar witness"))?;
            let w = crate::geometry::add(&w, c);
            Ok(witness(w, coefficients, halfspaces))
        }
    }
}

/// A point `t w` with `0 <= t <= 1` inside `conv(points)`, with its weights.
///
/// The polar of a strict separator lies in `conv(P) + cone(P)`; the segment
/// from the origin to it stays inside `∩H`.
fn pull_into_hull<S: Scalar>(w: &[S], points: &[Point<S>]) -> Option<(Vec<S>, Vec<(usize, S)>)> {
    let d = w.len();
    let n = points.len();
    // Rows: sum l_i p_i - t w = 0, sum l_i = 1, t + u = 1.
    let mut columns: Vec<Vec<S>> = points
        .iter()
        .map(|p| {
            let mut col = p.coords().to_vec();
            col.push(S::one());
            col.push(S::zero());
            col
        })
        .collect();
    let mut t_col: Vec<S> = w.iter().map(|v| -v.clone()).collect();
    t_col.push(S::zero());
    t_col.push(S::one());
    columns.push(t_col);
    let mut u_col = vec![S::zero(); d + 1];
    u_col.push(S::one());
    columns.push(u_col);
    let mut target = vec![S::zero(); d];
    target.push(S::one());
    target.push(S::one());
    let sol = nonneg_combination(&columns, &target)?;
    let coefficients: Vec<(usize, S)> = sol.into_iter().filter(|(j, _)| *j < n).collect();
    let mut y = vec![S::zero(); d];
    for (i, l) in &coefficients {
        for j in 0..d {
            y[j] = y[j].clone() + l.clone() * &points[*i][j];
        }
    }
    Some((y, coefficients))
}

/// Writes `nrm` as a nonnegative combination of the points whose polar
/// constraints are tight at `x`, and returns the normalized combination.
fn tight_cone_point<S: Scalar>(nrm: &[S], x: &[S], points: &[Point<S>]) -> Option<(Vec<S>, Vec<(usize, S)>)> {
    let d = nrm.len();
    let tight: Vec<usize> = (0..points.len())
        .filter(|&i| {
            let v = points[i].dot(x).to_f64();
            (v - 1.0).abs() <= 1e-6 * v.abs().max(1.0)
        })
        .collect();
    let big = nrm.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
    if tight.is_empty() || big == 0.0 {
        return None;
    }
    let target = scale(nrm, &S::from_f64(1.0 / big));
    let columns: Vec<Vec<S>> = tight.iter().map(|&i| points[i].coords().to_vec()).collect();
    let mu = nonneg_combination(&columns, &target)?;
    let total = mu.iter().fold(S::zero(), |acc, (_, m)| acc + m);
    if !total.is_positive() {
        return None;
    }
    let coefficients: Vec<(usize, S)> = mu.into_iter().map(|(k, m)| (tight[k], m / &total)).collect();
    let mut y = vec![S::zero(); d];
    for (i, l) in &coefficients {
        for j in 0..d {
            y[j] = y[j].clone() + l.clone() * &points[*i][j];
        }
    }
    Some((y, coefficients))
}

fn lost(what: &str) -> Error {
    let msg = format!("{what} is not in the hull of the points");
    if cfg!(test) {
        Error::InvariantViolation(msg)
    } else {
        Error::NumericFailure(msg)
    }
}

fn witness<S: Scalar>(point: Vec<S>, coefficients: Vec<(usize, S)>, halfspaces: &[Inequality<S>]) -> Certificate<S> {
    let slacks = slacks(halfspaces, &point);
    Certificate::Witness { point: Point::new(point), coefficients, slacks }
}

fn separator<S: Scalar>(pair: ClosestPair<S>, y_coefficients: Vec<(usize, S)>) -> Certificate<S> {
    let normal = sub(&pair.y, &pair.x);
    separator_along(pair, y_coefficients, normal)
}

fn separator_along<S: Scalar>(pair: ClosestPair<S>, y_coefficients: Vec<(usize, S)>, mut normal: Vec<S>) -> Certificate<S> {
    let distance = pair.distance();
    let len = normal.iter().map(|c| c.to_f64() * c.to_f64()).sum::<f64>().sqrt();
    if !S::EXACT && len > 0.0 {
        // Unit length keeps the float margin at half the distance.
        let inv = S::from_f64(1.0 / len);
        normal = normal.into_iter().map(|c| c * &inv).collect();
    }
    let offset = dot(&normal, &pair.x.midpoint(&pair.y));
    Certificate::Separator { normal, offset, pair, y_coefficients, distance }
}

/// Decides whether `conv(points)` meets `∩ halfspaces` and returns a certificate.
///
/// In float mode the certificate is checked before it is returned; one that
/// fails is replaced by the exact answer for the same (exactly converted) input.
pub fn solve<S: Scalar>(points: &[Point<S>], halfspaces: &[Inequality<S>], params: &AcitParams) -> Result<Solution<S>> {
    if S::EXACT {
        return solve_in(points, halfspaces, params);
    }
    let first = solve_in(points, halfspaces, params);
    if let Ok(sol) = &first {
        if check_certificate(points, halfspaces, &sol.certificate).valid {
            return first;
        }
    }
    let qp: Vec<Point<Rational>> = points.iter().map(|p| p.convert()).collect();
    let qh: Vec<Inequality<Rational>> = halfspaces.iter().map(|h| h.convert()).collect();
    let exact = solve_in(&qp, &qh, params)?;
    let conv = |v: &[(usize, Rational)]| v.iter().map(|(i, c)| (*i, S::from_ratio(c))).collect::<Vec<_>>();
    let certificate = match &exact.certificate {
        Certificate::Witness { coefficients, .. } => {
            polish(witness(vec![S::zero(); points[0].dim()], conv(coefficients), halfspaces), points, halfspaces)
        }
        Certificate::Separator { pair, y_coefficients, .. } => {
            let pair = ClosestPair::new(pair.x.convert(), pair.y.convert());
            polish(separator(pair, conv(y_coefficients)), points, halfspaces)
        }
        Certificate::EmptyH { multipliers } => Certificate::EmptyH { multipliers: conv(multipliers) },
    };
    let mut stats = exact.stats;
    stats.exact_retry = true;
    Ok(Solution { certificate, stats })
}

fn solve_in<S: Scalar>(points: &[Point<S>], halfspaces: &[Inequality<S>], params: &AcitParams) -> Result<Solution<S>> {
    let first = points.first().ok_or(Error::EmptyPointSet)?;
    let d = first.dim();
    if d < 2 {
        return Err(Error::DimensionTooSmall { min: 2, found: d });
    }
    for p in points {
        crate::geometry::check_dim(d, p.dim())?;
    }
    for h in halfspaces {
        crate::geometry::check_dim(d, h.dim())?;
    }

    let centroid: Vec<S> = (0..d)
        .map(|j| points.iter().fold(S::zero(), |acc, p| acc + &p[j]) / S::from_i64(points.len() as i64))
        .collect();
    let mut ctx = SolveContext::new(params, vec![S::zero(); d]);

    if halfspaces.is_empty() {
        let coefficients = vec![(0, S::one())];
        return Ok(Solution { certificate: witness(first.coords().to_vec(), coefficients, halfspaces), stats: ctx.stats });
    }
    let (center, margin) = match deep_interior_point(halfspaces, d, Some(&centroid)) {
        InteriorPoint::Infeasible { multipliers } => {
            return Ok(Solution { certificate: Certificate::EmptyH { multipliers }, stats: ctx.stats });
        }
        InteriorPoint::Feasible { point, margin } => (point.into_coords(), margin),
    };
    if !margin.is_positive() || (S::EXACT && touches_boundary(points, halfspaces)) {
        ctx.stats.degenerate = true;
        return direct(points, halfspaces, ctx);
    }

    ctx.translation = center.clone();
    let moved: Vec<Point<S>> = points.iter().map(|p| p.sub(&center)).collect();
    if let Some(coefficients) = convex_coefficients(&vec![S::zero(); d], &moved) {
        let certificate = polish(witness(center, coefficients, halfspaces), points, halfspaces);
        return Ok(Solution { certificate, stats: ctx.stats });
    }

    let mut normals: Vec<Point<S>> = Vec::with_capacity(halfspaces.len() + 2 * d);
    for h in halfspaces {
        if h.is_trivial() {
            continue;
        }
        let b = h.b.clone() - dot(&h.a, &center);
        normals.push(Point::new(scale(&h.a, &(S::one() / b))));
    }
    normals.extend(bounding_normals(&moved));

    let outcome = test(&moved, &normals, false, &mut ctx)?;
    if let TestOutcome::Intersect(pair) = &outcome {
        if pair.is_touching() {
            ctx.stats.degenerate = true;
            ctx.translation = vec![S::zero(); d];
            return direct(points, halfspaces, ctx);
        }
    }
    let certificate = match make_certificate(outcome, &moved, halfspaces, &ctx) {
        Ok(c) => c,
        Err(Error::NumericFailure(_)) if points.len() <= DIRECT_LIMIT && halfspaces.len() <= DIRECT_LIMIT => {
            ctx.stats.degenerate = true;
            ctx.translation = vec![S::zero(); d];
            return direct(points, halfspaces, ctx);
        }
        Err(e) => return Err(e),
    };
    let certificate = polish(certificate, points, halfspaces);
    Ok(Solution { certificate, stats: ctx.stats })
}

/// Normals `±e_j / B` of a cube that strictly contains every closest pair
/// between `conv(P)` and an intersection containing the origin.
fn bounding_normals<S: Scalar>(points: &[Point<S>]) -> Vec<Point<S>> {
    let d = points[0].dim();
    let r = points
        .iter()
        .map(|p| p.iter().map(|c| c.to_f64().abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let side = (2.0 * r + 1.0).max(1.0);
    let b = if S::EXACT { S::from_i64(side.ceil().min(9.0e15) as i64 + 1) } else { S::from_f64(side * 1.01) };
    let inv = S::one() / b;
    let mut out = Vec::with_capacity(2 * d);
    for j in 0..d {
        for s in [inv.clone(), -inv.clone()] {
            let mut z = vec![S::zero(); d];
            z[j] = s;
            out.push(Point::new(z));
        }
    }
    out
}

fn touches_boundary<S: Scalar>(points: &[Point<S>], halfspaces: &[Inequality<S>]) -> bool {
    points.iter().any(|p| halfspaces.iter().any(|h| !h.is_trivial() && h.slack(p).is_exact_zero()))
}

fn direct<S: Scalar>(points: &[Point<S>], halfspaces: &[Inequality<S>], mut ctx: SolveContext<S>) -> Result<Solution<S>> {
    ctx.stats.base_cases += 1;
    let seed = ctx.next_seed();
    let vh = closest_pair_vh_incremental(points, halfspaces, seed)?;
    let certificate = match vh.outcome {
        PairOutcome::Intersecting(pair) => witness(pair.y.into_coords(), vh.coefficients, halfspaces),
        PairOutcome::Disjoint(pair) => separator(pair, vh.coefficients),
    };
    Ok(Solution { certificate: polish(certificate, points, halfspaces), stats: ctx.stats })
}

/// In float mode, renormalizes convex weights and recomputes the points they
/// describe from the original coordinates.
fn polish<S: Scalar>(cert: Certificate<S>, points: &[Point<S>], halfspaces: &[Inequality<S>]) -> Certificate<S> {
    if S::EXACT {
        return cert;
    }
    let combine = |coefficients: Vec<(usize, S)>| {
        let total = coefficients.iter().fold(S::zero(), |acc, (_, l)| acc + l);
        let coefficients: Vec<(usize, S)> = coefficients.into_iter().map(|(i, l)| (i, l / &total)).collect();
        let d = points[0].dim();
        let mut y = vec![S::zero(); d];
        for (i, l) in &coefficients {
            for j in 0..d {
                y[j] = y[j].clone() + l.clone() * &points[*i][j];
            }
        }
        (y, coefficients)
    };
    match cert {
        Certificate::Witness { coefficients, .. } => {
            let (y, coefficients) = combine(coefficients);
            witness(y, coefficients, halfspaces)
        }
        Certificate::Separator { pair, y_coefficients, .. } => {
            let (y, coefficients) = combine(y_coefficients);
            match reproject(pair.x.coords(), &y, halfspaces) {
                Some((x, normal)) => separator_along(ClosestPair::new(Point::new(x), Point::new(y)), coefficients, normal),
                None => separator(ClosestPair::new(pair.x, Point::new(y)), coefficients),
            }
        }
        other => other,
    }
}

/// Projects `y` onto the flat of the halfspaces tight at `x`. Returns the new
/// point and `y - x` rebuilt as a nonnegative combination of the tight normals,
/// provided the point stays feasible and near `x`.
fn reproject<S: Scalar>(x: &[S], y: &[S], halfspaces: &[Inequality<S>]) -> Option<(Vec<S>, Vec<S>)> {
    let f = |v: &[S]| v.iter().map(|c| c.to_f64()).collect::<Vec<f64>>();
    let xf = f(x);
    let dotf = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    let scale = 1.0 + xf.iter().map(|c| c.abs()).fold(0.0, f64::max);
    let active: Vec<(Vec<f64>, f64)> = halfspaces
        .iter()
        .map(|h| (f(&h.a), h.b.to_f64()))
        .filter(|(a, b)| {
            let an = dotf(a, a).sqrt();
            an > 0.0 && (dotf(a, &xf) - b).abs() <= 1e-8 * an * scale
        })
        .collect();
    if active.is_empty() {
        return None;
    }
    let rows: Vec<Vec<S>> = active.iter().map(|(a, _)| a.iter().map(|v| S::from_f64(*v)).collect()).collect();
    let g: Vec<Vec<S>> = rows.iter().map(|r| rows.iter().map(|q| dot(r, q)).collect()).collect();
    let rhs: Vec<S> = rows.iter().zip(&active).map(|(r, (_, b))| dot(r, y) - S::from_f64(*b)).collect();
    let lambda = solve_consistent(&g, &rhs, rows.len()).particular;
    let mut out = y.to_vec();
    for (l, r) in lambda.iter().zip(&rows) {
        for j in 0..out.len() {
            out[j] = out[j].clone() - l.clone() * &r[j];
        }
    }
    let of = f(&out);
    let shift = of.iter().zip(&xf).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let feasible = halfspaces.iter().all(|h| h.contains(&Point::new(out.clone())));
    let top = lambda.iter().map(|l| l.to_f64().abs()).fold(0.0, f64::max);
    if !feasible || shift > 1e-7 * scale || top == 0.0 || lambda.iter().any(|l| l.to_f64() < -1e-9 * top) {
        return None;
    }
    let mut normal = vec![S::zero(); out.len()];
    for (l, r) in lambda.iter().zip(&rows) {
        if l.to_f64() > 0.0 {
            for j in 0..normal.len() {
                normal[j] = normal[j].clone() + l.clone() * &r[j];
            }
        }
    }
    Some((out, normal))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckReport {
    pub valid: bool,
    pub failures: Vec<String>,
}

impl CheckReport {
    fn fail(&mut self, msg: impl Into<String>) {
        self.valid = false;
        self.failures.push(msg.into());
    }
}

/// Verifies a certificate against the original instance.
pub fn check_certificate<S: Scalar>(points: &[Point<S>], halfspaces: &[Inequality<S>], cert: &Certificate<S>) -> CheckReport {
    let mut report = CheckReport { valid: true, failures: vec![] };
    let Some(first) = points.first() else {
        report.fail("empty point set");
        return report;
    };
    let d = first.dim();
    match cert {
        Certificate::Witness { point, coefficients, .. } => {
            if point.dim() != d {
                report.fail("witness dimension");
                return report;
            }
            check_combination(points, coefficients, point, "coefficients", &mut report);
            for (i, h) in halfspaces.iter().enumerate() {
                if !h.contains(point) {
                    report.fail(format!("halfspace {i} does not contain the witness"));
                }
            }
        }
        Certificate::Separator { normal, offset, pair, y_coefficients, distance } => {
            if normal.len() != d || normal.iter().all(|c| c.is_exact_zero()) {
                report.fail("separator normal");
                return report;
            }
            for (i, p) in points.iter().enumerate() {
                if !(dot(normal, p) - offset).is_positive() {
                    report.fail(format!("point {i} is not strictly on the point side"));
                }
            }
            for (i, h) in halfspaces.iter().enumerate() {
                if !h.contains(&pair.x) {
                    report.fail(format!("halfspace {i} does not contain the pair's x"));
                }
            }
            check_combination(points, y_coefficients, &pair.y, "y coefficients", &mut report);
            if pair.dist2 != pair.x.dist2(&pair.y) {
                report.fail("dist2 does not match the pair");
            }
            if (pair.distance() - distance).abs() > 1e-9 * (1.0 + distance.abs()) {
                report.fail("distance does not match the pair");
            }
            // ∩H lies on the far side of the hyperplane through x orthogonal
            // to the pair; conv(P) lies beyond the one through y. Together
            // they show the pair is closest and the separator strict.
            let neg: Vec<S> = normal.iter().map(|c| -c.clone()).collect();
            let bbox = check_box::<S>(points, halfspaces, d);
            let lp = solve_lp_in_box(&neg, halfspaces, 11, &bbox);
            match lp.status {
                LpStatus::Unbounded => report.fail("halfspace intersection is unbounded along the separator"),
                LpStatus::Infeasible => {}
                LpStatus::Optimal => {
                    let best = lp.optimum.expect("optimal point");
                    let top = dot(normal, &best);
                    if !(offset.clone() - &top).is_positive() {
                        report.fail("halfspace intersection crosses the separator");
                    }
                    let reach = best.dist2(&pair.x).to_f64().sqrt();
                    if exceeds(top - dot(normal, &pair.x), reach) {
                        report.fail("pair's x is not extreme in the halfspace intersection");
                    }
                }
            }
            let ny = dot(normal, &pair.y);
            if points.iter().any(|p| exceeds(ny.clone() - dot(normal, p), p.dist2(&pair.y).to_f64().sqrt())) {
                report.fail("pair's y is not extreme in the point hull");
            }
        }
        Certificate::EmptyH { multipliers } => {
            let mut a = vec![S::zero(); d];
            let mut b = S::zero();
            for (i, w) in multipliers {
                let Some(h) = halfspaces.get(*i) else {
                    report.fail(format!("multiplier index {i} out of range"));
                    return report;
                };
                if w.is_negative() {
                    report.fail(format!("multiplier {i} is negative"));
                }
                for j in 0..d {
                    a[j] = a[j].clone() + w.clone() * &h.a[j];
                }
                b = b + w.clone() * &h.b;
            }
            if a.iter().any(|c| !c.is_zero()) {
                report.fail("multipliers do not cancel the normals");
            }
            if !b.is_negative() {
                report.fail("multipliers do not give a negative right-hand side");
            }
        }
    }
    report
}

fn check_combination<S: Scalar>(
    points: &[Point<S>],
    coefficients: &[(usize, S)],
    target: &[S],
    what: &str,
    report: &mut CheckReport,
) {
    let d = target.len();
    let mut acc = vec![S::zero(); d];
    let mut total = S::zero();
    for (i, l) in coefficients {
        let Some(p) = points.get(*i) else {
            report.fail(format!("{what}: index {i} out of range"));
            return;
        };
        if l.is_negative() {
            report.fail(format!("{what}: negative weight on point {i}"));
        }
        total = total + l;
        for j in 0..d {
            acc[j] = acc[j].clone() + l.clone() * &p[j];
        }
    }
    if !(total - S::one()).is_zero() {
        report.fail(format!("{what}: weights do not sum to one"));
    }
    if acc.iter().zip(target).any(|(a, t)| !(a.clone() - t).is_zero()) {
        report.fail(format!("{what}: combination does not reproduce the point"));
    }
}

/// Whether `v` is positive; in float mode beyond a slack that grows with the
/// distance `reach` over which the normal's rounding error accumulates.
fn exceeds<S: Scalar>(v: S, reach: f64) -> bool {
    if S::EXACT {
        v.is_positive()
    } else {
        v.to_f64() > FLOAT_OPTIMALITY_TOL * (1.0 + reach)
    }
}

fn check_box<S: Scalar>(points: &[Point<S>], halfspaces: &[Inequality<S>], d: usize) -> LpBox<S> {
    if S::EXACT {
        return LpBox::default_for(d);
    }
    let mut scale = points.iter().flat_map(|p| p.iter()).map(|c| c.to_f64().abs()).fold(1.0, f64::max);
    for h in halfspaces {
        let an = h.a.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
        if an > 0.0 {
            scale = scale.max(h.b.to_f64().abs() / an);
        }
    }
    LpBox::covering(d, scale, 1e3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Float};

    type Q = Rational;

    fn q(s: &str) -> Q {
        parse_rational(s).unwrap()
    }

    fn leq(a: &[i64], b: i64) -> Inequality<Q> {
        Inequality::new(a.iter().map(|&v| Q::from_i64(v)).collect(), Q::from_i64(b))
    }

    fn geq(a: &[i64], b: i64) -> Inequality<Q> {
        Inequality::geq(a.iter().map(|&v| Q::from_i64(v)).collect(), Q::from_i64(b))
    }

    fn unit_square() -> Vec<Inequality<Q>> {
        vec![leq(&[1, 0], 1), leq(&[-1, 0], 1), leq(&[0, 1], 1), leq(&[0, -1], 1)]
    }

    fn square_normals() -> Vec<Point<Q>> {
        [[1, 0], [-1, 0], [0, 1], [0, -1]].iter().map(|z| Point::from_i64s(z)).collect()
    }

    fn params() -> AcitParams {
        AcitParams::for_dimension(2, 7).with_invariant_checks(true)
    }

    #[test]
    fn alpha_formula() {
        assert_eq!(alpha_for(2, 1.0), 26);
        assert_eq!(alpha_for(3, 1.0), 162);
        assert_eq!(alpha_for(2, 0.0), 16);
        assert_eq!(AcitParams::for_dimension(3, 0).alpha, 162);
        assert_eq!(AcitParams::for_dimension(4, 0).eps, q("1/256"));
    }

    #[test]
    fn test_on_square_examples() {
        let p: Vec<Point<Q>> = [[2, 0], [4, 0], [3, 1], [3, -1]].iter().map(|c| Point::from_i64s(c)).collect();
        let mut ctx = SolveContext::new(&params(), vec![q("0"), q("0")]);
        match test(&p, &square_normals(), false, &mut ctx).unwrap() {
            TestOutcome::Disjoint(pair) => {
                assert_eq!(pair.x.coords(), &[q("1"), q("0")]);
                assert_eq!(pair.y.coords(), &[q("2"), q("0")]);
            }
            other => panic!("unexpected {other:?}"),
        }

        let p2: Vec<Point<Q>> = vec![
            Point::new(vec![q("1/2"), q("0")]),
            Point::from_i64s(&[4, 0]),
            Point::from_i64s(&[3, 1]),
            Point::from_i64s(&[3, -1]),
        ];
        let outcome = test(&p2, &square_normals(), false, &mut ctx).unwrap();
        assert!(matches!(outcome, TestOutcome::Intersect(_)));
        let cert = make_certificate(outcome, &p2, &unit_square(), &ctx).unwrap();
        assert!(cert.intersects());
        assert!(check_certificate(&p2, &unit_square(), &cert).valid);
    }

    #[test]
    fn separator_from_pair() {
        let pair = ClosestPair::new(Point::from_i64s(&[1, 0]), Point::from_i64s(&[2, 0]));
        match separator(pair, vec![(0, q("1"))]) {
            Certificate::Separator { normal, offset, distance, .. } => {
                // <(1, 0), x> = 3/2
                assert_eq!(normal, vec![q("1"), q("0")]);
                assert_eq!(offset, q("3/2"));
                assert_eq!(distance, 1.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn solve_examples() {
        let any = vec![Point::from_i64s(&[5, 5])];
        let s = solve(&any, &[leq(&[1, 0], 0), geq(&[1, 0], 1)], &params()).unwrap();
        assert_eq!(s.certificate.kind(), "empty_h");
        assert!(check_certificate(&any, &[leq(&[1, 0], 0), geq(&[1, 0], 1)], &s.certificate).valid);

        let square: Vec<Point<Q>> = [[1, 1], [1, -1], [-1, 1], [-1, -1]].iter().map(|c| Point::from_i64s(c)).collect();
        let big = vec![leq(&[1, 0], 2), leq(&[-1, 0], 2), leq(&[0, 1], 2), leq(&[0, -1], 2)];
        let s = solve(&square, &big, &params()).unwrap();
        assert!(s.certificate.intersects());
        assert!(check_certificate(&square, &big, &s.certificate).valid);

        let far: Vec<Point<Q>> = [[10, 0], [12, 1], [12, -1], [11, 3]].iter().map(|c| Point::from_i64s(c)).collect();
        let s = solve(&far, &unit_square(), &params()).unwrap();
        match &s.certificate {
            Certificate::Separator { pair, distance, .. } => {
                assert_eq!(pair.dist2, q("81"));
                assert_eq!(*distance, 9.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(check_certificate(&far, &unit_square(), &s.certificate).valid);
    }

    #[test]
    fn touching_sets_give_witness() {
        let p: Vec<Point<Q>> = [[1, 0], [3, 1], [3, -1]].iter().map(|c| Point::from_i64s(c)).collect();
        let s = solve(&p, &unit_square(), &params()).unwrap();
        assert!(s.stats.degenerate);
        match &s.certificate {
            Certificate::Witness { point, .. } => assert_eq!(point.coords(), &[q("1"), q("0")]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(check_certificate(&p, &unit_square(), &s.certificate).valid);
    }

    #[test]
    fn checker_rejects_tampering() {
        let square: Vec<Point<Q>> = [[1, 1], [1, -1], [-1, 1], [-1, -1]].iter().map(|c| Point::from_i64s(c)).collect();
        let h = vec![leq(&[1, 0], 2), leq(&[-1, 0], 2), leq(&[0, 1], 2), leq(&[0, -1], 2)];
        let bad = Certificate::Witness {
            point: Point::from_i64s(&[0, 0]),
            coefficients: vec![(0, q("99/400")), (1, q("1/4")), (2, q("1/4")), (3, q("1/4"))],
            slacks: vec![],
        };
        let r = check_certificate(&square, &h, &bad);
        assert!(!r.valid);
        assert!(r.failures.iter().any(|f| f.contains("coefficients")));

        let p: Vec<Point<Q>> = [[2, 0], [4, 0], [3, 1], [3, -1]].iter().map(|c| Point::from_i64s(c)).collect();
        let s = solve(&p, &unit_square(), &params()).unwrap();
        assert!(check_certificate(&p, &unit_square(), &s.certificate).valid);
        let mut p_bad = p.clone();
        p_bad.push(Point::from_i64s(&[0, 0]));
        assert!(!check_certificate(&p_bad, &unit_square(), &s.certificate).valid);
    }

    #[test]
    fn recursion_runs_with_small_alpha() {
        // A ring of points around (20, 0) against a 24-gon-like box stack.
        let p: Vec<Point<Q>> = (0..60)
            .map(|i| {
                let t = Q::new((i - 30).into(), 11.into());
                let den = t.clone() * &t + q("1");
                let c = (q("1") - t.clone() * &t) / &den;
                let s = q("2") * t / den;
                Point::new(vec![c * q("3") + q("20"), s * q("3")])
            })
            .collect();
        let mut h = Vec::new();
        for i in 0..40 {
            let t = Q::new((i - 20).into(), 9.into());
            let den = t.clone() * &t + q("1");
            let a = vec![(q("1") - t.clone() * &t) / &den, q("2") * t / den];
            h.push(Inequality::new(a, q("2")));
        }
        let params = params().with_alpha_constant(2, 0.0).with_sample_rule(SampleRule::Sqrt { factor: 1.0 });
        let s = solve(&p, &h, &params).unwrap();
        assert!(s.stats.recursive_calls > 1);
        assert!(!s.certificate.intersects());
        assert!(check_certificate(&p, &h, &s.certificate).valid);
        assert!(s.stats.max_loop_length() <= 5);
    }

    #[test]
    fn float_mode_solve() {
        let p: Vec<Point<Float>> = [[2.0, 0.0], [4.0, 0.0], [3.0, 1.0], [3.0, -1.0]].iter().map(|c| Point::from_f64s(c)).collect();
        let h: Vec<Inequality<Float>> = unit_square().iter().map(|c| c.convert()).collect();
        let s = solve(&p, &h, &params()).unwrap();
        match &s.certificate {
            Certificate::Separator { distance, .. } => assert!((distance - 1.0).abs() < 1e-9),
            other => panic!("unexpected {other:?}"),
        }
        assert!(check_certificate(&p, &h, &s.certificate).valid);
    }
}
