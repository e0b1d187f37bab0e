//! Blackwell ordering of trade-off curves.

use serde::{Deserialize, Serialize};

use super::curve::TradeoffCurve;

/// Outcome of comparing two curves pointwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// f ≤ g everywhere: the first pair is at least as informative.
    LessEq,
    /// f ≥ g everywhere.
    GreaterEq,
    Equal,
    Incomparable,
}

impl Verdict {
    fn from_flags(le: bool, ge: bool) -> Self {
        match (le, ge) {
            (true, true) => Verdict::Equal,
            (true, false) => Verdict::LessEq,
            (false, true) => Verdict::GreaterEq,
            (false, false) => Verdict::Incomparable,
        }
    }

    /// True for `LessEq` and `Equal`.
    pub fn is_le(self) -> bool {
        matches!(self, Verdict::LessEq | Verdict::Equal)
    }

    /// True for `GreaterEq` and `Equal`.
    pub fn is_ge(self) -> bool {
        matches!(self, Verdict::GreaterEq | Verdict::Equal)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::LessEq => "lesseq",
            Verdict::GreaterEq => "greatereq",
            Verdict::Equal => "equal",
            Verdict::Incomparable => "incomparable",
        }
    }
}

/// Absolute tolerance for the closed-form inequality checks.
pub const CONDITION_TOL: f64 = 1e-12;

/// Uniform abscissae used by the pointwise fallback, before breakpoints are added.
pub const FALLBACK_GRID_POINTS: usize = 201;

/// Tolerance of the pointwise fallback comparison.
pub const FALLBACK_TOL: f64 = 1e-9;

/// Compares two curves: `LessEq` means f(x) ≤ g(x) for all x.
///
/// Same-family pairs use exact characterizations; everything else falls back
/// to [`grid_compare`].
pub fn dominates(f: &TradeoffCurve, g: &TradeoffCurve) -> Verdict {
    use TradeoffCurve as C;
    if f.is_identity() || g.is_identity() {
        return Verdict::from_flags(g.is_identity(), f.is_identity());
    }
    match (f, g) {
        (C::GaussianShift { mu: m1 }, C::GaussianShift { mu: m2 }) => {
            Verdict::from_flags(m1 >= m2, m1 <= m2)
        }
        (
            C::LocationShift {
                noise: n1,
                delta: d1,
            },
            C::LocationShift {
                noise: n2,
                delta: d2,
            },
        ) if n1 == n2 => Verdict::from_flags(d1 >= d2, d1 <= d2),
        (C::PoissonPair { a, b }, C::PoissonPair { a: c, b: d }) => {
            Verdict::from_flags(poisson_le(*a, *b, *c, *d), poisson_le(*c, *d, *a, *b))
        }
        (C::BinomialPair { n: n1, a, b }, C::BinomialPair { n: n2, a: c, b: d }) if n1 == n2 => {
            Verdict::from_flags(binomial_le(*a, *b, *c, *d), binomial_le(*c, *d, *a, *b))
        }
        _ => grid_compare(f, g, FALLBACK_GRID_POINTS, FALLBACK_TOL),
    }
}

fn similarly_ordered(a: f64, b: f64, c: f64, d: f64) -> bool {
    (a - b) * (c - d) >= -CONDITION_TOL
}

fn spread_ratio(a: f64, b: f64) -> f64 {
    a.max(b) / a.min(b)
}

/// T(P(a), P(b)) ≤ T(P(c), P(d)): similar ordering, |c − d| ≤ |a − b|, and
/// max/min(c, d) ≤ max/min(a, b).
pub fn poisson_le(a: f64, b: f64, c: f64, d: f64) -> bool {
    similarly_ordered(a, b, c, d)
        && (c - d).abs() <= (a - b).abs() + CONDITION_TOL
        && spread_ratio(c, d) <= spread_ratio(a, b) + CONDITION_TOL
}

/// T(B(n, a), B(n, b)) ≤ T(B(n, c), B(n, d)) for any common n.
///
/// Relabeling outcomes k ↦ n − k maps (c, d) to (1 − c, 1 − d) without
/// changing the curve, so (c, d) is first brought into the same order as
/// (a, b). Then the complement ratio (1 − max)/(1 − min) of (a, b) must be at
/// most that of (c, d), and max/min(c, d) ≤ max/min(a, b).
pub fn binomial_le(a: f64, b: f64, c: f64, d: f64) -> bool {
    let (c, d) = binomial_aligned(a, b, c, d);
    binomial_complement(a, b) <= binomial_complement(c, d) + CONDITION_TOL
        && spread_ratio(c, d) <= spread_ratio(a, b) + CONDITION_TOL
}

fn binomial_complement(x: f64, y: f64) -> f64 {
    (1.0 - x.max(y)) / (1.0 - x.min(y))
}

/// (c, d) or its relabeling (1 − c, 1 − d), whichever is ordered like (a, b).
fn binomial_aligned(a: f64, b: f64, c: f64, d: f64) -> (f64, f64) {
    if similarly_ordered(a, b, c, d) {
        (c, d)
    } else {
        (1.0 - c, 1.0 - d)
    }
}

/// Signed distances of each Poisson condition from its boundary in both
/// directions; small magnitudes mark float-hostile instances.
pub fn poisson_condition_margins(a: f64, b: f64, c: f64, d: f64) -> [f64; 4] {
    [
        (a - b).abs(),
        (c - d).abs(),
        (a - b).abs() - (c - d).abs(),
        spread_ratio(a, b) - spread_ratio(c, d),
    ]
}

/// As [`poisson_condition_margins`] for the Binomial chain, evaluated after
/// aligning the orders of the two pairs.
pub fn binomial_condition_margins(a: f64, b: f64, c: f64, d: f64) -> [f64; 4] {
    let (c, d) = binomial_aligned(a, b, c, d);
    [
        (a - b).abs(),
        (c - d).abs(),
        binomial_complement(c, d) - binomial_complement(a, b),
        spread_ratio(a, b) - spread_ratio(c, d),
    ]
}

/// Pointwise comparison on `points` uniform abscissae plus both curves'
/// breakpoints. Being piecewise linear between those points, discrete curves
/// are compared exactly up to `tol`.
pub fn grid_compare(f: &TradeoffCurve, g: &TradeoffCurve, points: usize, tol: f64) -> Verdict {
    let mut xs: Vec<f64> = (0..points)
        .map(|i| i as f64 / (points - 1) as f64)
        .collect();
    xs.extend(f.breakpoints());
    xs.extend(g.breakpoints());
    let (mut le, mut ge) = (true, true);
    for x in xs {
        let (fx, gx) = (f.value(x), g.value(x));
        le &= fx <= gx + tol;
        ge &= fx >= gx - tol;
        if !le && !ge {
            break;
        }
    }
    Verdict::from_flags(le, ge)
}

/// Thinning s and superposition rate r with P(c) = K^r ∘ K_s (P(a)) and
/// P(d) = K^r ∘ K_s (P(b)), i.e. c = s·a + r and d = s·b + r.
pub fn construct_thinning(a: f64, b: f64, c: f64, d: f64) -> Option<(f64, f64)> {
    if a == b {
        return (c == d).then_some((0.0, c));
    }
    let s = (c - d).abs() / (a - b).abs();
    let r = d - s * b;
    let in_range = (-CONDITION_TOL..=1.0 + CONDITION_TOL).contains(&s) && r >= -CONDITION_TOL;
    let consistent = (c - (s * a + r)).abs() <= CONDITION_TOL * (1.0 + c.abs());
    (in_range && consistent).then_some((s.clamp(0.0, 1.0), r.max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pois(a: f64, b: f64) -> TradeoffCurve {
        TradeoffCurve::poisson(a, b).unwrap()
    }

    #[test]
    fn poisson_reflexive() {
        assert_eq!(dominates(&pois(1.0, 2.0), &pois(1.0, 2.0)), Verdict::Equal);
    }

    #[test]
    fn poisson_thinning_example() {
        assert_eq!(dominates(&pois(1.0, 4.0), &pois(1.0, 2.0)), Verdict::LessEq);
        let (s, r) = construct_thinning(1.0, 4.0, 1.0, 2.0).unwrap();
        assert!((s - 1.0 / 3.0).abs() < 1e-15 && (r - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn poisson_opposite_order_incomparable() {
        assert_eq!(
            dominates(&pois(1.0, 2.0), &pois(2.0, 1.0)),
            Verdict::Incomparable
        );
        assert_eq!(construct_thinning(1.0, 2.0, 2.0, 1.0), None);
    }

    #[test]
    fn identity_kernel() {
        assert_eq!(construct_thinning(1.0, 2.0, 1.0, 2.0), Some((1.0, 0.0)));
    }

    #[test]
    fn gaussian_order_reversed_in_mu() {
        let g = |m| TradeoffCurve::gaussian(m).unwrap();
        assert_eq!(dominates(&g(2.0), &g(1.0)), Verdict::LessEq);
        assert_eq!(dominates(&g(1.0), &g(2.0)), Verdict::GreaterEq);
        assert_eq!(dominates(&g(0.0), &TradeoffCurve::Identity), Verdict::Equal);
    }

    #[test]
    fn cross_family_fallback() {
        // Bernoulli(0.5) vs Bernoulli(0.6) is far weaker than a 3σ Gaussian shift.
        let b = TradeoffCurve::binomial(1, 0.5, 0.6).unwrap();
        let g = TradeoffCurve::gaussian(3.0).unwrap();
        assert_eq!(dominates(&g, &b), Verdict::LessEq);
    }

    #[test]
    fn verdict_serializes_lowercase() {
        assert_eq!(
            serde_json::to_string(&Verdict::LessEq).unwrap(),
            "\"lesseq\""
        );
    }
}
