//! Tensor products of trade-off curves.
//!
//! Gaussian factors combine in closed form. Anything else is reduced to a
//! finite dichotomy (paired atoms of P-mass and Q-mass), and the product's
//! log-likelihood-ratio law is built by pairwise convolution, re-binned onto
//! [`LLR_BINS`] uniform bins after every step. Merging atoms within a bin is a
//! garbling, so the binned product is a valid, slightly conservative curve.

use super::curve::{NumericCurve, Product, TradeoffCurve};
use super::discrete::{binomial_pmfs, exact_discrete_tof, poisson_pmfs};
use crate::special::norm_sf;
use crate::{Error, Result};

/// Resolution of the discretized log-likelihood-ratio laws.
pub const LLR_BINS: usize = 4096;

// Standard-normal quantile range used to place knots on smooth curves.
const SMOOTH_Z_RANGE: f64 = 12.0;

/// Tensor product of a non-empty list of curves.
pub fn tensor(curves: &[TradeoffCurve]) -> Result<TradeoffCurve> {
    if curves.is_empty() {
        return Err(Error::invalid("tensor needs at least one curve"));
    }
    curves.iter().try_for_each(|c| c.validate())?;

    let mut factors = Vec::new();
    for c in curves {
        match c {
            TradeoffCurve::Product(p) => factors.extend(p.factors().iter().cloned()),
            other => factors.push(other.clone()),
        }
    }
    factors.retain(|f| !f.is_identity());

    if factors.is_empty() {
        return Ok(TradeoffCurve::Identity);
    }
    let shifts: Option<Vec<f64>> = factors.iter().map(gaussian_shift_of).collect();
    if let Some(mut mus) = shifts {
        // Sorting first makes the root-sum-square independent of input order.
        mus.sort_by(f64::total_cmp);
        let mu = mus.iter().map(|m| m * m).sum::<f64>().sqrt();
        return Ok(TradeoffCurve::GaussianShift { mu });
    }
    if factors.len() == 1 {
        return Ok(factors.pop().expect("one factor"));
    }
    Ok(TradeoffCurve::Product(Product::new(factors)))
}

fn gaussian_shift_of(c: &TradeoffCurve) -> Option<f64> {
    match c {
        TradeoffCurve::GaussianShift { mu } => Some(*mu),
        TradeoffCurve::LocationShift { noise, delta } => noise.gaussian_sigma().map(|s| delta / s),
        _ => None,
    }
}

/// Paired atoms (P-mass, Q-mass) of an experiment realizing the curve.
fn dichotomy(curve: &TradeoffCurve) -> Vec<(f64, f64)> {
    match curve {
        TradeoffCurve::PoissonPair { a, b } => {
            let (p, q) = poisson_pmfs(*a, *b);
            p.into_iter().zip(q).collect()
        }
        TradeoffCurve::BinomialPair { n, a, b } => {
            let (p, q) = binomial_pmfs(*n, *a, *b);
            p.into_iter().zip(q).collect()
        }
        TradeoffCurve::Numeric(c) => knots_to_atoms(c.grid(), c.values()),
        TradeoffCurve::Product(p) => knots_to_atoms(p.curve().grid(), p.curve().values()),
        smooth => {
            let (grid, values) = smooth_knots(smooth);
            knots_to_atoms(&grid, &values)
        }
    }
}

// Chords of a convex curve lie above it, so the inscribed polygon is a
// garbling of the original experiment.
fn smooth_knots(curve: &TradeoffCurve) -> (Vec<f64>, Vec<f64>) {
    let m = LLR_BINS - 1;
    let mut grid: Vec<f64> = (0..m)
        .map(|i| norm_sf(SMOOTH_Z_RANGE - 2.0 * SMOOTH_Z_RANGE * i as f64 / (m - 1) as f64))
        .collect();
    grid.extend(curve.breakpoints());
    grid.push(0.0);
    grid.push(1.0);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut values: Vec<f64> = grid.iter().map(|&x| curve.value(x)).collect();
    for i in 1..values.len() {
        values[i] = values[i].min(values[i - 1]);
    }
    (grid, values)
}

fn knots_to_atoms(grid: &[f64], values: &[f64]) -> Vec<(f64, f64)> {
    let mut atoms = vec![(0.0, 1.0 - values[0])];
    for i in 1..grid.len() {
        atoms.push((grid[i] - grid[i - 1], values[i - 1] - values[i]));
    }
    atoms.retain(|&(p, q)| p > 0.0 || q > 0.0);
    atoms
}

/// Atoms grouped by log-likelihood ratio: +∞ (P-null), −∞ (Q-null), and finite.
struct LlrLaw {
    pos_inf: f64,
    neg_inf: f64,
    finite: Vec<(f64, f64, f64)>,
}

impl LlrLaw {
    fn from_atoms(atoms: &[(f64, f64)]) -> Self {
        let mut law = LlrLaw {
            pos_inf: 0.0,
            neg_inf: 0.0,
            finite: Vec::new(),
        };
        for &(p, q) in atoms {
            if p <= 0.0 {
                law.pos_inf += q;
            } else if q <= 0.0 {
                law.neg_inf += p;
            } else {
                law.finite.push(((q / p).ln(), p, q));
            }
        }
        law.rebin();
        law
    }

    fn rebin(&mut self) {
        if self.finite.len() <= LLR_BINS {
            return;
        }
        let lo = self
            .finite
            .iter()
            .map(|a| a.0)
            .fold(f64::INFINITY, f64::min);
        let hi = self
            .finite
            .iter()
            .map(|a| a.0)
            .fold(f64::NEG_INFINITY, f64::max);
        let width = (hi - lo) / LLR_BINS as f64;
        let mut bins = vec![(0.0, 0.0); LLR_BINS];
        for &(l, p, q) in &self.finite {
            let i = (((l - lo) / width) as usize).min(LLR_BINS - 1);
            bins[i].0 += p;
            bins[i].1 += q;
        }
        self.finite = bins
            .into_iter()
            .filter(|&(p, q)| p > 0.0 && q > 0.0)
            .map(|(p, q)| ((q / p).ln(), p, q))
            .collect();
    }

    fn convolve(&self, other: &LlrLaw) -> LlrLaw {
        // Q-mass of a +∞ atom pairs with the Q-mass of every partner atom that
        // is not Q-null; symmetric for −∞.
        let q_total_other: f64 = other.pos_inf + other.finite.iter().map(|a| a.2).sum::<f64>();
        let q_total_self: f64 = self.pos_inf + self.finite.iter().map(|a| a.2).sum::<f64>();
        let p_total_other: f64 = other.neg_inf + other.finite.iter().map(|a| a.1).sum::<f64>();
        let p_total_self: f64 = self.neg_inf + self.finite.iter().map(|a| a.1).sum::<f64>();
        let pos_inf = self.pos_inf * q_total_other + other.pos_inf * q_total_self
            - self.pos_inf * other.pos_inf;
        let neg_inf = self.neg_inf * p_total_other + other.neg_inf * p_total_self
            - self.neg_inf * other.neg_inf;
        let mut finite = Vec::with_capacity(self.finite.len() * other.finite.len());
        for &(la, pa, qa) in &self.finite {
            for &(lb, pb, qb) in &other.finite {
                finite.push((la + lb, pa * pb, qa * qb));
            }
        }
        let mut law = LlrLaw {
            pos_inf,
            neg_inf,
            finite,
        };
        law.rebin();
        law
    }

    fn into_pmfs(self) -> (Vec<f64>, Vec<f64>) {
        let mut p = vec![0.0, self.neg_inf];
        let mut q = vec![self.pos_inf, 0.0];
        for (_, pa, qa) in self.finite {
            p.push(pa);
            q.push(qa);
        }
        let (sp, sq): (f64, f64) = (p.iter().sum(), q.iter().sum());
        p.iter_mut().for_each(|v| *v /= sp);
        q.iter_mut().for_each(|v| *v /= sq);
        (p, q)
    }
}

/// Evaluates a heterogeneous product as a piecewise-linear curve.
pub(crate) fn materialize_product(factors: &[TradeoffCurve]) -> NumericCurve {
    let mut law = LlrLaw::from_atoms(&dichotomy(&factors[0]));
    for f in &factors[1..] {
        law = law.convolve(&LlrLaw::from_atoms(&dichotomy(f)));
    }
    let (p, q) = law.into_pmfs();
    exact_discrete_tof(&p, &q).expect("product pmfs are normalized")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tof_core::NoiseModel;

    #[test]
    fn gaussian_root_sum_square() {
        let g = |mu| TradeoffCurve::gaussian(mu).unwrap();
        assert_eq!(tensor(&[g(3.0), g(4.0)]).unwrap(), g(5.0));
        assert_eq!(tensor(&[g(1.0), g(1.0), g(1.0), g(1.0)]).unwrap(), g(2.0));
    }

    #[test]
    fn identity_factors_drop_out() {
        let f = TradeoffCurve::poisson(1.0, 3.0).unwrap();
        assert_eq!(tensor(&[f.clone(), TradeoffCurve::Identity]).unwrap(), f);
        assert_eq!(
            tensor(&[TradeoffCurve::Identity]).unwrap(),
            TradeoffCurve::Identity
        );
        assert!(tensor(&[]).is_err());
    }

    #[test]
    fn poisson_product_matches_superposition() {
        // With equal rate ratios the sum is sufficient, so the product is P(a+a′) vs P(b+b′).
        let prod = tensor(&[
            TradeoffCurve::poisson(1.0, 2.0).unwrap(),
            TradeoffCurve::poisson(0.5, 1.0).unwrap(),
        ])
        .unwrap();
        let direct = TradeoffCurve::poisson(1.5, 3.0).unwrap();
        for i in 0..=50 {
            let x = i as f64 / 50.0;
            assert!((prod.value(x) - direct.value(x)).abs() < 1e-9, "x = {x}");
        }
    }

    #[test]
    fn bernoulli_squared_matches_binomial() {
        let b = TradeoffCurve::binomial(1, 0.3, 0.6).unwrap();
        let prod = tensor(&[b.clone(), b]).unwrap();
        let direct = TradeoffCurve::binomial(2, 0.3, 0.6).unwrap();
        for i in 0..=50 {
            let x = i as f64 / 50.0;
            assert!((prod.value(x) - direct.value(x)).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn gaussian_with_laplace_is_conservative_and_close() {
        let g = TradeoffCurve::gaussian(1.0).unwrap();
        let l = TradeoffCurve::location(NoiseModel::Laplace { scale: 1.0 }, 0.5).unwrap();
        let prod = tensor(&[g.clone(), l.clone()]).unwrap();
        assert!(matches!(prod, TradeoffCurve::Product(_)));
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            let v = prod.value(x);
            // The product is more informative than either factor.
            assert!(v <= g.value(x) + 1e-3 && v <= l.value(x) + 1e-3, "x = {x}");
        }
    }

    #[test]
    fn gaussian_numeric_product_close_to_closed_form() {
        let g = TradeoffCurve::gaussian(1.0).unwrap();
        let (grid, values) = smooth_knots(&g);
        let numeric = TradeoffCurve::Numeric(NumericCurve::new(grid, values).unwrap());
        let prod = tensor(&[numeric.clone(), numeric]).unwrap();
        let exact = TradeoffCurve::gaussian(std::f64::consts::SQRT_2).unwrap();
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            assert!((prod.value(x) - exact.value(x)).abs() < 2e-3, "x = {x}");
            assert!(prod.value(x) >= exact.value(x) - 1e-12);
        }
    }
}
