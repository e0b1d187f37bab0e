//! Exact Neyman–Pearson oracle for Poisson and Binomial pairs, and the sweep
//! that checks the closed-form ordering against it.
//!
//! Two independent checks decide whether f ≤ g:
//!
//! * the 101-point grid comparison of [`exact_discrete_tof`] curves at
//!   tolerance 1e-9, and
//! * a vertex walk in log coordinates. For convex piecewise-linear curves
//!   f ≤ g holds iff f lies below g at every vertex of g, so the walk
//!   evaluates f at each vertex of g, keeping ln x, ln(1 − x), ln y and
//!   ln(1 − y) separately. Crossings where both curves differ from 0 or 1 by
//!   less than 1e-300 stay visible this way, while the plain grid misses them.
//!
//! Poisson pairs have infinitely many atoms. The walk covers the first
//! [`WALK_ATOMS`] of them exactly, and the remaining tail is probed at
//! geometrically spaced atom indices up to 1e300. In that range the curve is
//! bracketed between neighbouring vertices, and only certain violations count.
//! Beyond 1e300 a double-log expansion, exact to double precision there,
//! carries the probe up to ln k = 1e13.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Open01;
use serde::{Deserialize, Serialize};

use crate::special::{binomial_ln_pmf, log1m_exp, log_add_exp, log_sub_exp, poisson_ln_pmf};
use crate::tof_core::{
    binomial_condition_margins, binomial_pmfs, dominates, exact_discrete_tof, grid_compare,
    poisson_condition_margins, poisson_pmfs, TradeoffCurve, Verdict,
};
use crate::{Error, Result};

/// Quadruples closer than this to any condition boundary are skipped.
pub const BOUNDARY_EXCLUSION: f64 = 1e-6;

/// Uniform abscissae of the grid comparison.
pub const ORACLE_GRID_POINTS: usize = 101;

/// Absolute tolerance of the grid comparison, and relative tolerance of the
/// log-coordinate walk.
pub const ORACLE_TOL: f64 = 1e-9;

/// Poisson atoms enumerated exactly by the walk.
pub const WALK_ATOMS: usize = 20_000;

/// Largest atom index reached by the tail probe.
pub const TAIL_PROBE_LIMIT: f64 = 1e300;

/// Largest ln(atom index) reached by the asymptotic probe.
pub const ASYMPTOTIC_PROBE_LIMIT: f64 = 1e13;

const TAIL_PROBE_STEP: f64 = 16.0;
const ASYMPTOTIC_PROBE_STEP: f64 = 1.02;
const LN_HALF: f64 = -std::f64::consts::LN_2;

/// One point of a trade-off curve in log coordinates.
#[derive(Clone, Copy, Debug)]
struct LogPoint {
    lx: f64,
    lcx: f64,
    ly: f64,
    lcy: f64,
}

/// x-ordering on log coordinates, using whichever side is better resolved.
fn x_lt(a: &LogPoint, b: &LogPoint) -> bool {
    if a.lx <= LN_HALF || b.lx <= LN_HALF {
        a.lx < b.lx
    } else {
        a.lcx > b.lcx
    }
}

/// Lower and upper bounds on ln f(x) and ln(1 − f(x)).
#[derive(Clone, Copy, Debug)]
struct ValueBounds {
    ly: (f64, f64),
    lcy: (f64, f64),
}

impl ValueBounds {
    fn exact(ly: f64, lcy: f64) -> Self {
        ValueBounds {
            ly: (ly, ly),
            lcy: (lcy, lcy),
        }
    }
}

/// ln P(K ≥ k) for K ~ Poisson(rate) with k well above the rate.
fn poisson_ln_sf_tail(rate: f64, k: f64) -> f64 {
    let (mut term, mut sum, mut i) = (1.0f64, 1.0f64, 1.0f64);
    loop {
        term *= rate / (k + i);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
        i += 1.0;
    }
    poisson_ln_pmf(k, rate) + sum.ln()
}

/// NP curve T(P, Q) of a pair with monotone likelihood ratio in the count.
struct LogCurve {
    verts: Vec<LogPoint>,
    /// ln P and ln Q masses of the atom joining vertices j and j + 1.
    atoms: Vec<(f64, f64)>,
    /// Whether Q/P increases with the count (reject large counts first).
    increasing: bool,
    /// Poisson rates (P, Q) when atoms beyond the walk exist.
    tail: Option<(f64, f64)>,
}

impl LogCurve {
    fn from_masses(lp: Vec<f64>, lq: Vec<f64>, tail: Option<(f64, f64)>, increasing: bool) -> Self {
        let m = lp.len();
        // sf[j] = ln P(K ≥ j), cdf[j] = ln P(K ≤ j − 1), for j = 0..=m.
        let survival = |l: &[f64], last: f64| {
            let mut sf = vec![0.0; m + 1];
            sf[m] = last;
            for j in (1..m).rev() {
                sf[j] = log_add_exp(l[j], sf[j + 1]);
            }
            sf
        };
        let cumulative = |l: &[f64], complete: bool| {
            let mut cdf = vec![f64::NEG_INFINITY; m + 1];
            for j in 0..m {
                cdf[j + 1] = log_add_exp(cdf[j], l[j]);
            }
            if complete {
                cdf[m] = 0.0;
            }
            cdf
        };
        let (sf_p, sf_q, cdf_p, cdf_q) = match tail {
            Some((p, q)) => (
                survival(&lp, poisson_ln_sf_tail(p, m as f64)),
                survival(&lq, poisson_ln_sf_tail(q, m as f64)),
                cumulative(&lp, false),
                cumulative(&lq, false),
            ),
            None => (
                survival(&lp, f64::NEG_INFINITY),
                survival(&lq, f64::NEG_INFINITY),
                cumulative(&lp, true),
                cumulative(&lq, true),
            ),
        };
        let verts = (0..=m)
            .map(|j| {
                if increasing {
                    LogPoint {
                        lx: sf_p[j],
                        lcx: cdf_p[j],
                        ly: cdf_q[j],
                        lcy: sf_q[j],
                    }
                } else {
                    LogPoint {
                        lx: cdf_p[j],
                        lcx: sf_p[j],
                        ly: sf_q[j],
                        lcy: cdf_q[j],
                    }
                }
            })
            .collect();
        LogCurve {
            verts,
            atoms: lp.into_iter().zip(lq).collect(),
            increasing,
            tail,
        }
    }

    fn poisson(p: f64, q: f64) -> Self {
        let lp = (0..WALK_ATOMS)
            .map(|k| poisson_ln_pmf(k as f64, p))
            .collect();
        let lq = (0..WALK_ATOMS)
            .map(|k| poisson_ln_pmf(k as f64, q))
            .collect();
        LogCurve::from_masses(lp, lq, Some((p, q)), q > p)
    }

    fn binomial(n: u64, p: f64, q: f64) -> Self {
        let lp = (0..=n).map(|k| binomial_ln_pmf(k, n, p)).collect();
        let lq = (0..=n).map(|k| binomial_ln_pmf(k, n, q)).collect();
        LogCurve::from_masses(lp, lq, None, q > p)
    }

    /// Vertex index of the i-th smallest x.
    fn ascending(&self, i: usize) -> usize {
        if self.increasing {
            self.verts.len() - 1 - i
        } else {
            i
        }
    }

    /// Exact value at x by interpolation inside the enumerated vertices.
    fn interpolate(&self, x: &LogPoint) -> Option<ValueBounds> {
        let n = self.verts.len();
        let count = partition_point(n, |i| !x_lt(x, &self.verts[self.ascending(i)]));
        if count == 0 {
            return None;
        }
        let left = self.verts[self.ascending(count - 1)];
        if count == n {
            return (!x_lt(&left, x)).then(|| ValueBounds::exact(left.ly, left.lcy));
        }
        let right = self.verts[self.ascending(count)];
        let (lp, lq) = self.atoms[self.ascending(count - 1).min(self.ascending(count))];
        let from_left = if x.lx <= LN_HALF {
            log_sub_exp(x.lx, left.lx)
        } else {
            log_sub_exp(left.lcx, x.lcx)
        };
        let to_right = if x.lcx <= LN_HALF {
            log_sub_exp(x.lcx, right.lcx)
        } else {
            log_sub_exp(right.lx, x.lx)
        };
        let ln_t = (from_left - lp).min(0.0);
        let ln_1mt = (to_right - lp).min(0.0);
        Some(ValueBounds::exact(
            log_add_exp(right.ly, ln_1mt + lq),
            log_add_exp(left.lcy, ln_t + lq),
        ))
    }

    /// Vertex after `k` atoms for a real k beyond the walk (Poisson only).
    fn tail_vertex(&self, k: f64) -> LogPoint {
        let (p, q) = self.tail.expect("tail vertices exist for Poisson pairs");
        let (sp, sq) = (poisson_ln_sf_tail(p, k), poisson_ln_sf_tail(q, k));
        if self.increasing {
            LogPoint {
                lx: sp,
                lcx: log1m_exp(sp),
                ly: log1m_exp(sq),
                lcy: sq,
            }
        } else {
            LogPoint {
                lx: log1m_exp(sp),
                lcx: sp,
                ly: sq,
                lcy: log1m_exp(sq),
            }
        }
    }

    /// Value bounds at an x beyond the enumerated vertices, from the two
    /// vertices around it (located by bisection on the real atom index).
    fn tail_bounds(&self, x: &LogPoint) -> Option<ValueBounds> {
        let (p, q) = self.tail?;
        let target = if self.increasing { x.lx } else { x.lcx };
        let first = WALK_ATOMS as f64;
        let last = TAIL_PROBE_LIMIT * 100.0;
        if target >= poisson_ln_sf_tail(p, first) || target < poisson_ln_sf_tail(p, last) {
            return None;
        }
        let (mut lo, mut hi) = (first.ln(), last.ln());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if poisson_ln_sf_tail(p, mid.exp()) > target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-16 * hi {
                break;
            }
        }
        let k = hi.exp();
        let k_lo = (k * (1.0 - 1e-12)).floor().max(first);
        let k_hi = (k * (1.0 + 1e-12)).ceil().max(k_lo + 1.0);
        let (far, near) = (poisson_ln_sf_tail(q, k_hi), poisson_ln_sf_tail(q, k_lo));
        let tail_side = (far, near);
        let other_side = (log1m_exp(near), log1m_exp(far));
        Some(if self.increasing {
            ValueBounds {
                ly: other_side,
                lcy: tail_side,
            }
        } else {
            ValueBounds {
                ly: tail_side,
                lcy: other_side,
            }
        })
    }

    fn bounds_at(&self, x: &LogPoint) -> Option<ValueBounds> {
        self.interpolate(x).or_else(|| self.tail_bounds(x))
    }

    /// Enumerated vertices followed by probe vertices deep in the tail.
    fn probe_points(&self) -> Vec<LogPoint> {
        let mut pts = self.verts.clone();
        if self.tail.is_some() {
            let mut k = WALK_ATOMS as f64 * TAIL_PROBE_STEP;
            while k <= TAIL_PROBE_LIMIT {
                pts.push(self.tail_vertex(k));
                k *= TAIL_PROBE_STEP;
            }
        }
        pts
    }
}

/// Probes Poisson vertices past atom index 1e300, where both curves have
/// their tails at the same end.
///
/// With u = ln k, Stirling's series gives ln(−ln P(K ≥ k)) = u + ln(u − 1 −
/// ln rate) up to terms of relative size e^{−u} < 1e-300. Write X and Y for
/// that double-log of the tail-side x and y coordinates. At a vertex u of g,
/// the abscissa-matched point of f is u + s with X_f(u + s) = X_g(u), and
/// f lies above g iff Y_f(u + s) − Y_g(u) has the sign of a violation. Both the
/// shift and the difference are computed from O(1/u) terms, so the
/// comparison stays accurate where X and Y themselves exceed 1e9.
fn asymptotic_violation(f: (f64, f64), g: (f64, f64), increasing: bool) -> bool {
    let ((fp, fq), (gp, gq)) = (f, g);
    let mut u = TAIL_PROBE_LIMIT.ln();
    while u <= ASYMPTOTIC_PROBE_LIMIT {
        let base_x = u - 1.0 - gp.ln();
        let mut shift = 0.0f64;
        for _ in 0..100 {
            let next = -((shift + (gp / fp).ln()) / base_x).ln_1p();
            let done = (next - shift).abs() <= 1e-17 * next.abs();
            shift = next;
            if done {
                break;
            }
        }
        let ratio_term = ((shift + (gq / fq).ln()) / (u - 1.0 - gq.ln())).ln_1p();
        let diff = shift + ratio_term;
        let tol = 1e-12 * (shift.abs() + ratio_term.abs());
        // Increasing pairs compare 1 − y (f above g iff Y_f > Y_g), decreasing
        // pairs compare y (f above g iff Y_f < Y_g).
        if (increasing && diff > tol) || (!increasing && diff < -tol) {
            return true;
        }
        u *= ASYMPTOTIC_PROBE_STEP;
    }
    false
}

fn partition_point(n: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0, n);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

fn tolerance(v: f64) -> f64 {
    ORACLE_TOL + 1e-12 * v.abs()
}

/// True when f certainly exceeds g at some vertex of g.
fn certainly_above(f: &LogCurve, g: &LogCurve) -> bool {
    if let (Some(fr), Some(gr)) = (f.tail, g.tail) {
        if f.increasing == g.increasing && asymptotic_violation(fr, gr, f.increasing) {
            return true;
        }
    }
    g.probe_points().iter().any(|pt| {
        let Some(b) = f.bounds_at(pt) else {
            return false;
        };
        if pt.ly <= LN_HALF {
            b.ly.0 > pt.ly + tolerance(pt.ly)
        } else {
            b.lcy.1 < pt.lcy - tolerance(pt.lcy)
        }
    })
}

/// Verdict of the vertex walk alone; identical pairs give the identity curve.
fn walk_verdict(f: Option<&LogCurve>, g: Option<&LogCurve>) -> Verdict {
    let (le, ge) = match (f, g) {
        (None, None) => (true, true),
        // The identity lies above every trade-off curve.
        (Some(_), None) => (true, false),
        (None, Some(_)) => (false, true),
        (Some(f), Some(g)) => (!certainly_above(f, g), !certainly_above(g, f)),
    };
    from_flags(le, ge)
}

fn from_flags(le: bool, ge: bool) -> Verdict {
    match (le, ge) {
        (true, true) => Verdict::Equal,
        (true, false) => Verdict::LessEq,
        (false, true) => Verdict::GreaterEq,
        (false, false) => Verdict::Incomparable,
    }
}

fn combine(a: Verdict, b: Verdict) -> Verdict {
    from_flags(a.is_le() && b.is_le(), a.is_ge() && b.is_ge())
}

/// Quadruple family of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PairFamily {
    /// Rates drawn uniformly from (0.1, 6].
    Poisson,
    /// Success probabilities drawn uniformly from (0.05, 0.95), compared as
    /// Binomial(n, ·) pairs; n = 1 is the Bernoulli case.
    Binomial { n: u64 },
}

impl PairFamily {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            PairFamily::Poisson => 6.0 - 5.9 * rng.random::<f64>(),
            PairFamily::Binomial { .. } => 0.05 + 0.9 * rng.sample::<f64, _>(Open01),
        }
    }

    fn margins(&self, q: [f64; 4]) -> [f64; 4] {
        match self {
            PairFamily::Poisson => poisson_condition_margins(q[0], q[1], q[2], q[3]),
            PairFamily::Binomial { .. } => binomial_condition_margins(q[0], q[1], q[2], q[3]),
        }
    }

    fn curve(&self, a: f64, b: f64) -> Result<TradeoffCurve> {
        match self {
            PairFamily::Poisson => TradeoffCurve::poisson(a, b),
            PairFamily::Binomial { n } => TradeoffCurve::binomial(*n, a, b),
        }
    }

    fn log_curve(&self, a: f64, b: f64) -> Option<LogCurve> {
        if a == b {
            return None;
        }
        Some(match self {
            PairFamily::Poisson => LogCurve::poisson(a, b),
            PairFamily::Binomial { n } => LogCurve::binomial(*n, a, b),
        })
    }

    fn numeric(&self, a: f64, b: f64) -> Result<TradeoffCurve> {
        let (p, q) = match self {
            PairFamily::Poisson => poisson_pmfs(a, b),
            PairFamily::Binomial { n } => binomial_pmfs(*n, a, b),
        };
        Ok(TradeoffCurve::Numeric(exact_discrete_tof(&p, &q)?))
    }

    fn validate(&self) -> Result<()> {
        match self {
            PairFamily::Binomial { n: 0 } => Err(Error::invalid("n must be at least 1")),
            _ => Ok(()),
        }
    }
}

/// Ordering verdicts for one quadruple: T(a, b) against T(c, d).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleVerdicts {
    /// The 101-point grid comparison of exact curves.
    pub grid: Verdict,
    /// The vertex walk in log coordinates.
    pub walk: Verdict,
    /// Both checks combined: an ordering holds only if neither refutes it.
    pub exact: Verdict,
}

/// Compares T(a, b) with T(c, d) on exact Neyman–Pearson curves, without
/// using any closed-form characterization.
pub fn oracle_verdict(family: PairFamily, quad: [f64; 4]) -> Result<OracleVerdicts> {
    family.validate()?;
    let [a, b, c, d] = quad;
    let grid = grid_compare(
        &family.numeric(a, b)?,
        &family.numeric(c, d)?,
        ORACLE_GRID_POINTS,
        ORACLE_TOL,
    );
    let walk = walk_verdict(
        family.log_curve(a, b).as_ref(),
        family.log_curve(c, d).as_ref(),
    );
    Ok(OracleVerdicts {
        grid,
        walk,
        exact: combine(grid, walk),
    })
}

/// One compared quadruple of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub verdict_closed_form: Verdict,
    pub verdict_oracle: Verdict,
    pub verdict_grid: Verdict,
}

impl SweepRow {
    pub fn agrees(&self) -> bool {
        self.verdict_closed_form == self.verdict_oracle
    }

    pub fn agrees_with_grid(&self) -> bool {
        self.verdict_closed_form == self.verdict_grid
    }
}

/// Agreement between the closed-form ordering and the exact oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub family: PairFamily,
    pub seed: u64,
    pub sampled: u64,
    /// Quadruples dropped for lying within [`BOUNDARY_EXCLUSION`] of a boundary.
    pub excluded: u64,
    pub compared: u64,
    /// Fraction of compared quadruples where the oracle reproduces the closed form.
    pub agreement: f64,
    /// The same fraction against the grid comparison alone.
    pub grid_agreement: f64,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn disagreements(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| !r.agrees())
    }
}

/// Samples `count` quadruples, drops those near a condition boundary, and
/// compares [`dominates`] against [`oracle_verdict`] on the rest.
pub fn domination_oracle_sweep(family: PairFamily, count: u64, seed: u64) -> Result<SweepReport> {
    family.validate()?;
    if count == 0 {
        return Err(Error::invalid("count must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut excluded = 0;
    for _ in 0..count {
        let quad = [(); 4].map(|_| family.sample(&mut rng));
        if family
            .margins(quad)
            .iter()
            .any(|m| m.abs() < BOUNDARY_EXCLUSION)
        {
            excluded += 1;
            continue;
        }
        let [a, b, c, d] = quad;
        let closed = dominates(&family.curve(a, b)?, &family.curve(c, d)?);
        let oracle = oracle_verdict(family, quad)?;
        rows.push(SweepRow {
            a,
            b,
            c,
            d,
            verdict_closed_form: closed,
            verdict_oracle: oracle.exact,
            verdict_grid: oracle.grid,
        });
    }
    let compared = rows.len() as u64;
    let fraction = |n: usize| {
        if compared == 0 {
            1.0
        } else {
            n as f64 / compared as f64
        }
    };
    Ok(SweepReport {
        family,
        seed,
        sampled: count,
        excluded,
        compared,
        agreement: fraction(rows.iter().filter(|r| r.agrees()).count()),
        grid_agreement: fraction(rows.iter().filter(|r| r.agrees_with_grid()).count()),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_curve_matches_linear_curve() {
        for (p, q) in [(1.0, 3.0), (4.0, 0.5)] {
            let lc = LogCurve::poisson(p, q);
            let TradeoffCurve::Numeric(num) = PairFamily::Poisson.numeric(p, q).unwrap() else {
                unreachable!()
            };
            for i in 1..100 {
                let x = i as f64 / 100.0;
                let pt = LogPoint {
                    lx: x.ln(),
                    lcx: (-x).ln_1p(),
                    ly: 0.0,
                    lcy: 0.0,
                };
                let b = lc.interpolate(&pt).unwrap();
                assert!(
                    (b.ly.0.exp() - num.value(x)).abs() < 1e-11,
                    "({p},{q}) at {x}"
                );
                assert!((b.lcy.0.exp() - (1.0 - num.value(x))).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn binomial_log_curve_ends_at_corners() {
        let lc = LogCurve::binomial(5, 0.3, 0.6);
        let first = lc.verts[0];
        let last = lc.verts[lc.verts.len() - 1];
        assert_eq!((first.lx, first.ly), (0.0, f64::NEG_INFINITY));
        assert_eq!((last.lx, last.ly), (f64::NEG_INFINITY, 0.0));
    }

    #[test]
    fn garbled_pair_is_less_informative() {
        // (c, d) = (0.5a + 1, 0.5b + 1) thins and superposes (a, b).
        let v = oracle_verdict(PairFamily::Poisson, [1.0, 4.0, 1.5, 3.0]).unwrap();
        assert_eq!(v.exact, Verdict::LessEq);
        let v = oracle_verdict(PairFamily::Poisson, [1.5, 3.0, 1.0, 4.0]).unwrap();
        assert_eq!(v.exact, Verdict::GreaterEq);
    }

    #[test]
    fn tail_crossing_found_by_walk_only() {
        // Similarly ordered with |c − d| < |a − b| but a larger spread ratio:
        // the curves cross only where both are within 1e-9 of 0 or 1.
        let quad = [2.0, 4.0, 0.5, 1.02];
        assert!(!crate::tof_core::poisson_le(
            quad[0], quad[1], quad[2], quad[3]
        ));
        let v = oracle_verdict(PairFamily::Poisson, quad).unwrap();
        assert!(!v.walk.is_le());
        assert_eq!(v.exact, Verdict::Incomparable);
    }

    #[test]
    fn identical_pairs_reduce_to_identity() {
        let v = oracle_verdict(PairFamily::Binomial { n: 1 }, [0.3, 0.3, 0.2, 0.7]).unwrap();
        assert_eq!(v.exact, Verdict::GreaterEq);
    }

    #[test]
    fn small_sweeps_agree() {
        for family in [
            PairFamily::Poisson,
            PairFamily::Binomial { n: 1 },
            PairFamily::Binomial { n: 5 },
        ] {
            let r = domination_oracle_sweep(family, 40, 11).unwrap();
            assert_eq!(r.compared + r.excluded, 40);
            let bad: Vec<_> = r.disagreements().collect();
            assert!(bad.is_empty(), "{family:?}: {bad:?}");
        }
    }

    #[test]
    fn sweep_is_deterministic() {
        let a = domination_oracle_sweep(PairFamily::Binomial { n: 1 }, 30, 5).unwrap();
        let b = domination_oracle_sweep(PairFamily::Binomial { n: 1 }, 30, 5).unwrap();
        assert_eq!(a, b);
        assert!(domination_oracle_sweep(PairFamily::Poisson, 0, 5).is_err());
    }
}
