//! Trade-off functions: representation, evaluation, composition, inversion,
//! ordering, divergence levels, and the exact discrete Neyman–Pearson oracle.

mod curve;
mod discrete;
mod levels;
mod noise;
mod order;
mod product;
mod query;

pub use curve::{NumericCurve, Product, TradeoffCurve};
pub use discrete::{binomial_pmfs, exact_discrete_tof, poisson_pmfs, TRUNCATION_MASS};
pub use levels::{hellinger_transform, kl_level, tv_level};
pub use noise::{NoiseModel, TabulatedCdf};
pub use order::{
    binomial_condition_margins, binomial_le, construct_thinning, dominates, grid_compare,
    poisson_condition_margins, poisson_le, Verdict, CONDITION_TOL, FALLBACK_GRID_POINTS,
    FALLBACK_TOL,
};
pub use product::{tensor, LLR_BINS};
pub use query::{check_unlearning, pair_curve, Distribution, UnlearningCheck, UnlearningQuery};

use crate::Result;

/// f(x) for x ∈ [0, 1].
pub fn eval_curve(curve: &TradeoffCurve, x: f64) -> Result<f64> {
    curve.eval(x)
}

/// inf{x : f(x) ≤ t} for t ∈ [0, 1].
pub fn invert_curve(curve: &TradeoffCurve, t: f64) -> Result<f64> {
    curve.invert(t)
}
