//! Regions of the Poisson and Binomial families.
//!
//! Both follow from the closed-form characterizations of the Blackwell order
//! in [`crate::tof_core::poisson_le`] and [`crate::tof_core::binomial_le`]:
//! each constraint is linear or a ratio in the candidate parameter, so the
//! region is one interval whose endpoints are explicit.

use super::{AlphaInterval, Classification, Family, RegionParams, RegionResult};
use crate::{Error, Result};

fn check_rate(v: f64, what: &str) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::invalid(format!(
            "{what} must be positive and finite, got {v}"
        )));
    }
    Ok(())
}

fn check_poisson_level(v: f64, what: &str) -> Result<()> {
    check_rate(v, what)?;
    if v == 1.0 {
        return Err(Error::invalid(format!(
            "{what} must differ from 1; use 1 ± 1e-9 for the limit"
        )));
    }
    Ok(())
}

fn interval_region(
    family: Family,
    class: Classification,
    delta: f64,
    lo: f64,
    hi: f64,
) -> RegionResult {
    let (classification, intervals) = if lo > hi {
        (Classification::Empty, vec![])
    } else {
        (class, vec![[lo, hi]])
    };
    RegionResult {
        family,
        classification,
        delta: Some(delta),
        params: RegionParams::Intervals { intervals },
        pareto_samples: vec![],
    }
}

/// Rates μ with T(P(μ), P(μ₁)) ≤ T(P(1), P(α)) and T(P(μ), P(ν₁)) ≥ T(P(1), P(ε)).
pub fn poisson_region(
    unwanted: f64,
    desired: f64,
    alpha: f64,
    epsilon: f64,
) -> Result<RegionResult> {
    check_rate(unwanted, "unwanted rate")?;
    check_rate(desired, "desired rate")?;
    check_poisson_level(alpha, "alpha")?;
    check_poisson_level(epsilon, "epsilon")?;
    let (m, v) = (unwanted, desired);
    // Removal: α > 1 caps μ from above, α < 1 bounds it from below.
    let (removal_lo, removal_hi) = if alpha > 1.0 {
        (0.0, (m / alpha).min(m - alpha + 1.0))
    } else {
        ((m / alpha).max(m + 1.0 - alpha), f64::INFINITY)
    };
    // Preservation: μ lies between ν₁ and the nearest point still ε-close.
    let (keep_lo, keep_hi) = if epsilon < 1.0 {
        (v, (v / epsilon).min(v + 1.0 - epsilon))
    } else {
        ((v / epsilon).max(v - epsilon + 1.0), v)
    };
    let (lo, hi) = (removal_lo.max(keep_lo), removal_hi.min(keep_hi));
    Ok(interval_region(
        Family::Poisson,
        Classification::PoissonInterval,
        (m - v).abs(),
        lo,
        hi,
    ))
}

/// Removal levels α with a non-empty Poisson region at preservation level ε.
///
/// Returns up to two intervals, one on each side of α = 1 (which is never
/// included). Intervals whose ends cross are dropped.
pub fn poisson_pareto(unwanted: f64, desired: f64, epsilon: f64) -> Result<Vec<AlphaInterval>> {
    check_rate(unwanted, "unwanted rate")?;
    check_rate(desired, "desired rate")?;
    check_poisson_level(epsilon, "epsilon")?;
    let (m, v) = (unwanted, desired);
    let (below, above) = if epsilon < 1.0 {
        let upper = (v / epsilon).min(v + 1.0 - epsilon);
        ((m / upper).max(m + 1.0 - upper), (m / v).min(m + 1.0 - v))
    } else {
        let lower = (v / epsilon).max(v - epsilon + 1.0);
        ((m / v).max(m + 1.0 - v), (m / lower).min(m + 1.0 - lower))
    };
    let candidates = [
        AlphaInterval {
            lo: below,
            hi: 1.0,
            lo_open: false,
            hi_open: true,
        },
        AlphaInterval {
            lo: 1.0,
            hi: above,
            lo_open: true,
            hi_open: false,
        },
    ];
    Ok(candidates.into_iter().filter(|i| !i.is_empty()).collect())
}

fn check_probability(v: f64, what: &str) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::invalid(format!(
            "{what} must lie in (0, 1), got {v}"
        )));
    }
    Ok(())
}

/// Success probabilities p with T(B(n, p), B(n, μ₁)) ≤ T(B(n, ½), B(n, α)) and
/// T(B(n, p), B(n, ν₁)) ≥ T(B(n, ½), B(n, ε)).
///
/// The characterization does not depend on n, so neither does the region.
/// Relabeling outcomes makes the baselines symmetric under α ↦ 1 − α, so
/// removal admits p on both sides of μ₁ and the region is a union of at
/// most two intervals.
pub fn binomial_region(
    n: u64,
    unwanted: f64,
    desired: f64,
    alpha: f64,
    epsilon: f64,
) -> Result<RegionResult> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    check_probability(unwanted, "unwanted probability")?;
    check_probability(desired, "desired probability")?;
    check_probability(alpha, "alpha")?;
    check_probability(epsilon, "epsilon")?;
    let (m, v) = (unwanted, desired);
    let (a, e) = (alpha.max(1.0 - alpha), epsilon.max(1.0 - epsilon));
    // Removal: below μ₁ the ratio μ₁/p must reach 2a and the complement ratio
    // fall to 2(1 − a); above μ₁ the mirrored conditions apply.
    let below = (m / (2.0 * a)).min((m + (1.0 - 2.0 * a)) / (2.0 * (1.0 - a)));
    let above = (m / (2.0 * (1.0 - a))).max((m + (2.0 * a - 1.0)) / (2.0 * a));
    // Preservation: p stays within the same ratios of ν₁ on either side.
    let keep_lo = (v / (2.0 * e)).max((v + (1.0 - 2.0 * e)) / (2.0 * (1.0 - e)));
    let keep_hi = (v / (2.0 * (1.0 - e))).min((v + (2.0 * e - 1.0)) / (2.0 * e));
    let intervals: Vec<[f64; 2]> = [[keep_lo, below.min(keep_hi)], [above.max(keep_lo), keep_hi]]
        .into_iter()
        .filter(|[lo, hi]| lo <= hi)
        .collect();
    // Adjacent pieces (a = ½) merge into one.
    let intervals = match intervals.as_slice() {
        [x, y] if x[1] >= y[0] => vec![[x[0], y[1]]],
        _ => intervals,
    };
    let classification = match intervals.len() {
        0 => Classification::Empty,
        1 => Classification::SubInterval,
        _ => Classification::IntervalSet,
    };
    Ok(RegionResult {
        family: Family::Binomial,
        classification,
        delta: Some((m - v).abs()),
        params: RegionParams::Intervals { intervals },
        pareto_samples: vec![],
    })
}
