//! Divergence levels of baseline pairs and the Poisson Hellinger transform.

use super::curve::TradeoffCurve;
use super::discrete::{binomial_pmfs, poisson_pmfs};
use crate::special::norm_cdf;
use crate::{Error, Result};

/// KL(Q, P) of the pair (P, Q) realizing the curve.
pub fn kl_level(curve: &TradeoffCurve) -> Result<f64> {
    match curve {
        TradeoffCurve::Identity => Ok(0.0),
        TradeoffCurve::GaussianShift { mu } => Ok(0.5 * mu * mu),
        TradeoffCurve::PoissonPair { a, b } => Ok(b * (b / a).ln() - b + a),
        TradeoffCurve::BinomialPair { n, a, b } => {
            let per_trial = b * (b / a).ln() + (1.0 - b) * ((1.0 - b) / (1.0 - a)).ln();
            Ok(*n as f64 * per_trial)
        }
        // KL is additive over independent coordinates.
        TradeoffCurve::Product(p) => p.factors().iter().map(kl_level).sum(),
        other => Err(unsupported("kl_level", other)),
    }
}

/// Total variation distance of the pair realizing the curve.
pub fn tv_level(curve: &TradeoffCurve) -> Result<f64> {
    match curve {
        TradeoffCurve::Identity => Ok(0.0),
        TradeoffCurve::GaussianShift { mu } => Ok(2.0 * norm_cdf(0.5 * mu) - 1.0),
        TradeoffCurve::PoissonPair { a, b } => {
            let (p, q) = poisson_pmfs(*a, *b);
            Ok(half_l1(&p, &q))
        }
        TradeoffCurve::BinomialPair { n, a, b } => {
            let (p, q) = binomial_pmfs(*n, *a, *b);
            Ok(half_l1(&p, &q))
        }
        other => Err(unsupported("tv_level", other)),
    }
}

fn half_l1(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

fn unsupported(op: &str, curve: &TradeoffCurve) -> Error {
    let kind = match curve {
        TradeoffCurve::LocationShift { .. } => "location_shift",
        TradeoffCurve::Product(_) => "product",
        TradeoffCurve::Numeric(_) => "numeric",
        _ => "curve",
    };
    Error::Unsupported(format!("{op} has no closed form for {kind}"))
}

/// H_t(P(a), P(b)) = ∫ dP^{1−t} dQ^t = exp{−(1−t)a − t·b + b^t a^{1−t}}.
pub fn hellinger_transform(a: f64, b: f64, t: f64) -> f64 {
    (-(1.0 - t) * a - t * b + b.powf(t) * a.powf(1.0 - t)).exp()
}
