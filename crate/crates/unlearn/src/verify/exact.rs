//! Closed-form removal and preservation verdicts for a fitted family member.

use crate::families_regions::{FamilySpec, Metric};
use crate::tof_core::{binomial_le, poisson_le};
use crate::Result;

/// Whether the member with parameter `candidate` meets removal at level α and
/// preservation at level ε against the pair in `spec`.
///
/// Shift families compare distances in their own metric: removal needs
/// distance ≥ α from the unwanted parameter, preservation distance ≤ ε from
/// the desired one. Poisson and Binomial members use the exact orderings
/// against the baselines T(P(1), P(α)) and T(B(n, ½), B(n, α)).
pub fn check_unlearning_exact(
    spec: &FamilySpec,
    candidate: &[f64],
    alpha: f64,
    epsilon: f64,
) -> Result<(bool, bool)> {
    spec.validate()?;
    let scalar = |c: &[f64]| match c {
        [v] => Ok(*v),
        _ => Err(crate::Error::DimensionMismatch(format!(
            "expected one parameter, got {}",
            c.len()
        ))),
    };
    let by_metric = |metric: Metric, unwanted: &[f64], desired: &[f64]| -> Result<(bool, bool)> {
        Ok((
            metric.distance(candidate, unwanted)? >= alpha,
            metric.distance(candidate, desired)? <= epsilon,
        ))
    };
    match spec {
        FamilySpec::Gaussian {
            unwanted,
            desired,
            cov,
        } => by_metric(Metric::Mahalanobis { cov: cov.clone() }, unwanted, desired),
        FamilySpec::Location {
            unwanted, desired, ..
        } => {
            let mu = scalar(candidate)?;
            Ok((
                (mu - unwanted).abs() >= alpha,
                (mu - desired).abs() <= epsilon,
            ))
        }
        FamilySpec::WhiteNoise { unwanted, desired } => {
            by_metric(Metric::Trapezoid, unwanted, desired)
        }
        FamilySpec::Hilbert {
            eigenvalues,
            unwanted,
            desired,
        } => by_metric(
            Metric::Spectral {
                eigenvalues: eigenvalues.clone(),
            },
            unwanted,
            desired,
        ),
        FamilySpec::Poisson { unwanted, desired } => {
            let mu = scalar(candidate)?;
            Ok((
                poisson_le(mu, *unwanted, 1.0, alpha),
                poisson_le(1.0, epsilon, mu, *desired),
            ))
        }
        FamilySpec::Binomial {
            unwanted, desired, ..
        } => {
            let p = scalar(candidate)?;
            Ok((
                binomial_le(p, *unwanted, 0.5, alpha),
                binomial_le(0.5, epsilon, p, *desired),
            ))
        }
    }
}
