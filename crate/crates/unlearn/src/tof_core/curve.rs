//! The tagged trade-off curve type, its evaluation, and its inverse.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::discrete::{binomial_pmfs, exact_discrete_tof, poisson_pmfs};
use super::noise::NoiseModel;
use super::product::materialize_product;
use crate::special::{norm_cdf, norm_isf};
use crate::{Error, Result};

/// A trade-off function x ↦ inf{type-II error of level-x tests}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TradeoffCurve {
    /// f(x) = 1 − x: indistinguishable pair.
    Identity,
    /// T(N(0,1), N(mu,1)).
    GaussianShift { mu: f64 },
    /// T(X, X + delta) for a symmetric log-concave noise X.
    LocationShift { noise: NoiseModel, delta: f64 },
    /// T(Poisson(a), Poisson(b)).
    PoissonPair { a: f64, b: f64 },
    /// T(Binomial(n, a), Binomial(n, b)).
    BinomialPair { n: u64, a: f64, b: f64 },
    /// Tensor product of heterogeneous factors.
    Product(Product),
    /// Piecewise-linear curve through explicit knots.
    Numeric(NumericCurve),
}

/// Tensor product node. The materialized curve is computed once on first use.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Product {
    factors: Vec<TradeoffCurve>,
    #[serde(skip)]
    cache: OnceLock<NumericCurve>,
}

impl PartialEq for Product {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

impl Product {
    pub(crate) fn new(factors: Vec<TradeoffCurve>) -> Self {
        Product {
            factors,
            cache: OnceLock::new(),
        }
    }

    pub fn factors(&self) -> &[TradeoffCurve] {
        &self.factors
    }

    /// The piecewise-linear curve obtained by log-likelihood-ratio convolution.
    pub fn curve(&self) -> &NumericCurve {
        self.cache
            .get_or_init(|| materialize_product(&self.factors))
    }
}

/// Piecewise-linear curve through `(grid[i], values[i])`, with `grid` strictly
/// increasing from 0 to 1 and `values` non-increasing with `values[i] ≤ 1 − grid[i]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve", into = "RawCurve")]
pub struct NumericCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<RawCurve> for NumericCurve {
    type Error = Error;
    fn try_from(raw: RawCurve) -> Result<Self> {
        NumericCurve::new(raw.grid, raw.values)
    }
}

impl From<NumericCurve> for RawCurve {
    fn from(c: NumericCurve) -> Self {
        RawCurve {
            grid: c.grid,
            values: c.values,
        }
    }
}

const KNOT_TOL: f64 = 1e-12;

impl NumericCurve {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::DimensionMismatch(
                "grid and values lengths differ".into(),
            ));
        }
        if grid.len() < 2 {
            return Err(Error::invalid("numeric curve needs at least two knots"));
        }
        if grid[0] != 0.0 || grid[grid.len() - 1] != 1.0 {
            return Err(Error::invalid(
                "numeric curve grid must start at 0 and end at 1",
            ));
        }
        if grid
            .windows(2)
            .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::invalid(
                "numeric curve grid must be strictly increasing",
            ));
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::invalid("numeric curve values must lie in [0, 1]"));
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::invalid(
                "numeric curve values must be non-increasing",
            ));
        }
        if grid
            .iter()
            .zip(&values)
            .any(|(x, v)| *v > 1.0 - x + KNOT_TOL)
        {
            return Err(Error::invalid("numeric curve exceeds 1 − x"));
        }
        Ok(NumericCurve { grid, values })
    }

    /// Builds a curve from knots already known to satisfy the invariants.
    pub(crate) fn from_parts(grid: Vec<f64>, values: Vec<f64>) -> Self {
        debug_assert!(NumericCurve::new(grid.clone(), values.clone()).is_ok());
        NumericCurve { grid, values }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Linear interpolation between knots.
    pub fn value(&self, x: f64) -> f64 {
        let i = self.grid.partition_point(|&g| g <= x);
        if i == 0 {
            return self.values[0];
        }
        if i >= self.grid.len() {
            return self.values[self.values.len() - 1];
        }
        let (x0, x1) = (self.grid[i - 1], self.grid[i]);
        let (y0, y1) = (self.values[i - 1], self.values[i]);
        y0 + (y1 - y0) * ((x - x0) / (x1 - x0))
    }

    /// inf{x : f(x) ≤ t}.
    pub fn inverse(&self, t: f64) -> f64 {
        if self.values[0] <= t {
            return 0.0;
        }
        let i = self.values.partition_point(|&v| v > t);
        if i >= self.values.len() {
            return 1.0;
        }
        let (x0, x1) = (self.grid[i - 1], self.grid[i]);
        let (y0, y1) = (self.values[i - 1], self.values[i]);
        (x0 + (x1 - x0) * ((y0 - t) / (y0 - y1))).clamp(x0, x1)
    }
}

fn check_unit(x: f64, what: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("{what} = {x} lies outside [0, 1]")));
    }
    Ok(())
}

fn check_positive(v: f64, what: &str) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::invalid(format!(
            "{what} must be positive and finite, got {v}"
        )));
    }
    Ok(())
}

fn check_probability(v: f64, what: &str) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::invalid(format!(
            "{what} must lie in (0, 1), got {v}"
        )));
    }
    Ok(())
}

impl TradeoffCurve {
    pub fn gaussian(mu: f64) -> Result<Self> {
        let c = TradeoffCurve::GaussianShift { mu };
        c.validate()?;
        Ok(c)
    }

    pub fn location(noise: NoiseModel, delta: f64) -> Result<Self> {
        let c = TradeoffCurve::LocationShift { noise, delta };
        c.validate()?;
        Ok(c)
    }

    pub fn poisson(a: f64, b: f64) -> Result<Self> {
        let c = TradeoffCurve::PoissonPair { a, b };
        c.validate()?;
        Ok(c)
    }

    pub fn binomial(n: u64, a: f64, b: f64) -> Result<Self> {
        let c = TradeoffCurve::BinomialPair { n, a, b };
        c.validate()?;
        Ok(c)
    }

    /// Checks the variant's parameter domain (used after deserialization).
    pub fn validate(&self) -> Result<()> {
        match self {
            TradeoffCurve::Identity | TradeoffCurve::Numeric(_) => Ok(()),
            TradeoffCurve::GaussianShift { mu } => {
                if !(*mu >= 0.0 && mu.is_finite()) {
                    return Err(Error::invalid(format!(
                        "gaussian shift must be non-negative, got {mu}"
                    )));
                }
                Ok(())
            }
            TradeoffCurve::LocationShift { noise, delta } => {
                noise.validate()?;
                if !(*delta >= 0.0 && delta.is_finite()) {
                    return Err(Error::invalid(format!(
                        "location shift must be non-negative, got {delta}"
                    )));
                }
                Ok(())
            }
            TradeoffCurve::PoissonPair { a, b } => {
                check_positive(*a, "poisson rate a")?;
                check_positive(*b, "poisson rate b")
            }
            TradeoffCurve::BinomialPair { n, a, b } => {
                if *n == 0 {
                    return Err(Error::invalid("binomial trials must be positive"));
                }
                check_probability(*a, "binomial a")?;
                check_probability(*b, "binomial b")
            }
            TradeoffCurve::Product(p) => {
                if p.factors.is_empty() {
                    return Err(Error::invalid("product needs at least one factor"));
                }
                p.factors.iter().try_for_each(|f| f.validate())
            }
        }
    }

    /// True when the curve is identically 1 − x by construction.
    pub fn is_identity(&self) -> bool {
        match self {
            TradeoffCurve::Identity => true,
            TradeoffCurve::GaussianShift { mu } => *mu == 0.0,
            TradeoffCurve::LocationShift { delta, .. } => *delta == 0.0,
            TradeoffCurve::PoissonPair { a, b } => a == b,
            TradeoffCurve::BinomialPair { a, b, .. } => a == b,
            TradeoffCurve::Product(p) => p.factors.iter().all(|f| f.is_identity()),
            TradeoffCurve::Numeric(_) => false,
        }
    }

    /// f(x) for x ∈ [0, 1].
    pub fn eval(&self, x: f64) -> Result<f64> {
        check_unit(x, "x")?;
        Ok(self.value(x))
    }

    /// f⁻¹(t) = inf{x : f(x) ≤ t} for t ∈ [0, 1].
    pub fn invert(&self, t: f64) -> Result<f64> {
        check_unit(t, "t")?;
        Ok(self.inverse_value(t))
    }

    /// Unchecked evaluation; `x` must lie in [0, 1].
    pub(crate) fn value(&self, x: f64) -> f64 {
        if self.is_identity() {
            return 1.0 - x;
        }
        match self {
            TradeoffCurve::Identity => 1.0 - x,
            TradeoffCurve::GaussianShift { mu } => gaussian_tof(*mu, x),
            TradeoffCurve::LocationShift { noise, delta } => location_tof(noise, *delta, x),
            TradeoffCurve::PoissonPair { a, b } => {
                let (p, q) = poisson_pmfs(*a, *b);
                exact_discrete_tof(&p, &q)
                    .expect("truncated pmfs are normalized")
                    .value(x)
            }
            TradeoffCurve::BinomialPair { n: 1, a, b } => bernoulli_tof(*a, *b, x),
            TradeoffCurve::BinomialPair { n, a, b } => {
                let (p, q) = binomial_pmfs(*n, *a, *b);
                exact_discrete_tof(&p, &q)
                    .expect("binomial pmfs are normalized")
                    .value(x)
            }
            TradeoffCurve::Product(p) => p.curve().value(x),
            TradeoffCurve::Numeric(c) => c.value(x),
        }
    }

    pub(crate) fn inverse_value(&self, t: f64) -> f64 {
        if self.is_identity() {
            return 1.0 - t;
        }
        match self {
            // Symmetric shift families are their own inverses.
            TradeoffCurve::Identity => 1.0 - t,
            TradeoffCurve::GaussianShift { .. } | TradeoffCurve::LocationShift { .. } => {
                self.value(t)
            }
            // The inverse of T(P, Q) is T(Q, P).
            TradeoffCurve::PoissonPair { a, b } => {
                TradeoffCurve::PoissonPair { a: *b, b: *a }.value(t)
            }
            TradeoffCurve::BinomialPair { n, a, b } => TradeoffCurve::BinomialPair {
                n: *n,
                a: *b,
                b: *a,
            }
            .value(t),
            TradeoffCurve::Product(p) => p.curve().inverse(t),
            TradeoffCurve::Numeric(c) => c.inverse(t),
        }
    }

    /// Knots of piecewise-linear variants; empty for smooth curves.
    pub fn breakpoints(&self) -> Vec<f64> {
        if self.is_identity() {
            return Vec::new();
        }
        match self {
            TradeoffCurve::PoissonPair { a, b } => {
                let (p, q) = poisson_pmfs(*a, *b);
                exact_discrete_tof(&p, &q)
                    .map(|c| c.grid)
                    .unwrap_or_default()
            }
            TradeoffCurve::BinomialPair { n: 1, a, b } => {
                vec![0.0, if b > a { *a } else { 1.0 - a }, 1.0]
            }
            TradeoffCurve::BinomialPair { n, a, b } => {
                let (p, q) = binomial_pmfs(*n, *a, *b);
                exact_discrete_tof(&p, &q)
                    .map(|c| c.grid)
                    .unwrap_or_default()
            }
            TradeoffCurve::LocationShift {
                noise: NoiseModel::Uniform { half_width },
                delta,
            } => {
                let kink = 1.0 - delta / (2.0 * half_width);
                if kink > 0.0 {
                    vec![kink]
                } else {
                    Vec::new()
                }
            }
            TradeoffCurve::Product(p) => p.curve().grid.clone(),
            TradeoffCurve::Numeric(c) => c.grid.clone(),
            _ => Vec::new(),
        }
    }
}

/// Φ(Φ⁻¹(1 − x) − μ).
fn gaussian_tof(mu: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x >= 1.0 {
        return 0.0;
    }
    norm_cdf(norm_isf(x) - mu)
}

/// F(F⁻¹(1 − x) − δ).
fn location_tof(noise: &NoiseModel, delta: f64, x: f64) -> f64 {
    if let Some(sigma) = noise.gaussian_sigma() {
        return gaussian_tof(delta / sigma, x);
    }
    if x >= 1.0 {
        return 0.0;
    }
    let t = noise.isf(x) - delta;
    if t.is_infinite() {
        return if t > 0.0 { 1.0 } else { 0.0 };
    }
    noise.cdf(t).min(1.0 - x)
}

/// Exact trade-off function of Bernoulli(a) against Bernoulli(b).
fn bernoulli_tof(a: f64, b: f64, x: f64) -> f64 {
    if b > a {
        if x <= a {
            1.0 - (b / a) * x
        } else {
            ((1.0 - b) / (1.0 - a)) * (1.0 - x)
        }
    } else if b < a {
        if x <= 1.0 - a {
            1.0 - ((1.0 - b) / (1.0 - a)) * x
        } else {
            (b / a) * (1.0 - x)
        }
    } else {
        1.0 - x
    }
    .clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_zero_shift_is_identity() {
        let g = TradeoffCurve::gaussian(0.0).unwrap();
        assert_eq!(g.eval(0.3).unwrap(), 0.7);
    }

    #[test]
    fn gaussian_unit_shift_at_half() {
        // Φ(−1) to 18 digits.
        let g = TradeoffCurve::gaussian(1.0).unwrap();
        assert!((g.eval(0.5).unwrap() - 0.158_655_253_931_457_05).abs() < 1e-12);
    }

    #[test]
    fn bernoulli_equal_rates_is_identity() {
        let c = TradeoffCurve::binomial(1, 0.4, 0.4).unwrap();
        assert_eq!(c.eval(0.25).unwrap(), 0.75);
    }

    #[test]
    fn bernoulli_formula_matches_exact_envelope() {
        for &(a, b) in &[(0.3, 0.8), (0.8, 0.3), (0.1, 0.15), (0.6, 0.2)] {
            let closed = TradeoffCurve::binomial(1, a, b).unwrap();
            let exact = exact_discrete_tof(&[1.0 - a, a], &[1.0 - b, b]).unwrap();
            for i in 0..=100 {
                let x = i as f64 / 100.0;
                assert!(
                    (closed.value(x) - exact.value(x)).abs() < 1e-14,
                    "{a} {b} {x}"
                );
            }
        }
    }

    #[test]
    fn identity_inverse() {
        assert!((TradeoffCurve::Identity.invert(0.4).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn gaussian_round_trip() {
        let g = TradeoffCurve::gaussian(1.0).unwrap();
        let t = g.eval(0.37).unwrap();
        assert!((g.invert(t).unwrap() - 0.37).abs() < 1e-9);
    }

    #[test]
    fn uniform_location_curve_has_flat_zero_tail() {
        let c = TradeoffCurve::location(NoiseModel::Uniform { half_width: 1.0 }, 0.5).unwrap();
        assert!((c.eval(0.0).unwrap() - 0.75).abs() < 1e-15);
        assert!((c.eval(0.5).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(c.eval(0.9).unwrap(), 0.0);
        assert!((c.invert(0.0).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn laplace_location_closed_form() {
        let c = TradeoffCurve::location(NoiseModel::Laplace { scale: 1.0 }, 1.0).unwrap();
        // x = 0.1: F⁻¹(0.9) = ln 5, t = ln 5 − 1 > 0, F(t) = 1 − ½·e^{1}/5.
        let expected = 1.0 - 0.5 * std::f64::consts::E / 5.0;
        assert!((c.eval(0.1).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn rejects_out_of_range_argument() {
        assert!(TradeoffCurve::Identity.eval(1.5).is_err());
        assert!(TradeoffCurve::Identity.invert(-0.1).is_err());
    }

    #[test]
    fn numeric_curve_validation() {
        assert!(NumericCurve::new(vec![0.0, 0.5, 0.4, 1.0], vec![1.0, 0.5, 0.4, 0.0]).is_err());
        assert!(NumericCurve::new(vec![0.0, 1.0], vec![1.0, 0.0]).is_ok());
        assert!(NumericCurve::new(vec![0.0, 0.5, 1.0], vec![1.0, 0.6, 0.0]).is_err());
    }

    #[test]
    fn numeric_inverse_handles_flat_pieces() {
        let c = NumericCurve::new(vec![0.0, 0.5, 1.0], vec![0.5, 0.0, 0.0]).unwrap();
        assert_eq!(c.inverse(0.0), 0.5);
        assert_eq!(c.inverse(0.6), 0.0);
        assert!((c.inverse(0.25) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn json_round_trip() {
        let curves = vec![
            TradeoffCurve::Identity,
            TradeoffCurve::gaussian(1.5).unwrap(),
            TradeoffCurve::location(NoiseModel::Laplace { scale: 2.0 }, 1.0).unwrap(),
            TradeoffCurve::poisson(1.0, 2.0).unwrap(),
            TradeoffCurve::Numeric(NumericCurve::new(vec![0.0, 1.0], vec![1.0, 0.0]).unwrap()),
        ];
        for c in curves {
            let s = serde_json::to_string(&c).unwrap();
            let back: TradeoffCurve = serde_json::from_str(&s).unwrap();
            assert_eq!(back, c);
        }
    }
}
