//! Direction checks of the Hellinger transform under Poisson garbling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::tof_core::{dominates, hellinger_transform, poisson_condition_margins, TradeoffCurve};
use crate::verify::BOUNDARY_EXCLUSION;
use crate::{Error, Result};

/// Default exponents of the sweep, including both equality points.
pub const HELLINGER_T_GRID: [f64; 9] = [-1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0];

/// Tolerance of every inequality and equality check.
pub const HELLINGER_TOL: f64 = 1e-12;

/// One failed check: H_t of the informative pair and of the garbled pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HellingerViolation {
    pub quadruple: [f64; 4],
    pub t: f64,
    pub informative: f64,
    pub garbled: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HellingerReport {
    pub quadruples: usize,
    pub t_grid: Vec<f64>,
    pub checks: usize,
    pub violations: Vec<HellingerViolation>,
}

impl HellingerReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For each quadruple with T(P(a), P(b)) ≤ T(P(c), P(d)), checks
/// H_t(a, b) ≤ H_t(c, d) on [0, 1] and the reverse outside it, with equality
/// at t ∈ {0, 1}.
pub fn hellinger_sweep(quadruples: &[[f64; 4]], t_grid: &[f64]) -> Result<HellingerReport> {
    let mut violations = Vec::new();
    let mut checks = 0;
    for &quad in quadruples {
        let [a, b, c, d] = quad;
        if !dominates(
            &TradeoffCurve::poisson(a, b)?,
            &TradeoffCurve::poisson(c, d)?,
        )
        .is_le()
        {
            return Err(Error::invalid(format!(
                "({a}, {b}) does not dominate ({c}, {d})"
            )));
        }
        for &t in t_grid {
            let (informative, garbled) =
                (hellinger_transform(a, b, t), hellinger_transform(c, d, t));
            let ok = if t == 0.0 || t == 1.0 {
                (informative - garbled).abs() <= HELLINGER_TOL
            } else if (0.0..=1.0).contains(&t) {
                informative <= garbled + HELLINGER_TOL
            } else {
                informative >= garbled - HELLINGER_TOL
            };
            checks += 1;
            if !ok {
                violations.push(HellingerViolation {
                    quadruple: quad,
                    t,
                    informative,
                    garbled,
                });
            }
        }
    }
    Ok(HellingerReport {
        quadruples: quadruples.len(),
        t_grid: t_grid.to_vec(),
        checks,
        violations,
    })
}

/// Draws `count` dominating Poisson quadruples: (a, b) uniform on (0.1, 6]²
/// and (c, d) = (s·a + r, s·b + r) for thinning s ∈ (0, 1) and added rate
/// r ∈ [0, 2). Draws near a condition boundary are skipped.
pub fn sample_dominating_poisson(count: usize, seed: u64) -> Vec<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = 6.0 - 5.9 * rng.random::<f64>();
        let b = 6.0 - 5.9 * rng.random::<f64>();
        let s: f64 = rng.random();
        let r = 2.0 * rng.random::<f64>();
        let quad = [a, b, s * a + r, s * b + r];
        if poisson_condition_margins(quad[0], quad[1], quad[2], quad[3])
            .iter()
            .all(|m| m.abs() >= BOUNDARY_EXCLUSION)
        {
            out.push(quad);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        let r = hellinger_sweep(&[[1.0, 4.0, 1.0, 2.0]], &[0.0, 0.5, 1.0, 2.0]).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.checks, 4);
        assert!(hellinger_transform(1.0, 4.0, 0.5) < hellinger_transform(1.0, 2.0, 0.5));
        assert!(hellinger_transform(1.0, 4.0, 2.0) > hellinger_transform(1.0, 2.0, 2.0));
    }

    #[test]
    fn sampled_quadruples_hold() {
        let quads = sample_dominating_poisson(50, 3);
        let r = hellinger_sweep(&quads, &HELLINGER_T_GRID).unwrap();
        assert!(r.holds(), "{:?}", r.violations);
    }

    #[test]
    fn rejects_non_dominating_input() {
        assert!(hellinger_sweep(&[[1.0, 2.0, 1.0, 4.0]], &[0.5]).is_err());
    }
}
