//! Random and selective removal followed by a weighted fit.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::families_regions::Covariance;
use crate::{Error, Result};

/// Per-set location estimator, combined across sets with weights n₁′ and n₂.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    WeightedMean,
    /// One-dimensional data only.
    WeightedMedian,
}

/// IID draws from one population; every point has the same dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    points: Vec<Vec<f64>>,
}

impl SampleSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::invalid("sample set must be non-empty"));
        };
        let d = first.len();
        if d == 0 {
            return Err(Error::invalid("points must have at least one coordinate"));
        }
        if points.iter().any(|p| p.len() != d) {
            return Err(Error::DimensionMismatch(
                "points differ in dimension".into(),
            ));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::invalid("points must be finite"));
        }
        Ok(SampleSet { points })
    }

    /// A set of one-dimensional points.
    pub fn scalar(values: &[f64]) -> Result<Self> {
        SampleSet::new(values.iter().map(|&v| vec![v]).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }
}

fn estimate(points: &[&Vec<f64>], estimator: Estimator) -> Result<Vec<f64>> {
    let d = points[0].len();
    match estimator {
        Estimator::WeightedMean => {
            let mut acc = vec![0.0; d];
            for p in points {
                for (a, v) in acc.iter_mut().zip(p.iter()) {
                    *a += v;
                }
            }
            let n = points.len() as f64;
            Ok(acc.into_iter().map(|a| a / n).collect())
        }
        Estimator::WeightedMedian => {
            if d != 1 {
                return Err(Error::Unsupported(
                    "the median estimator needs one-dimensional data".into(),
                ));
            }
            let mut v: Vec<f64> = points.iter().map(|p| p[0]).collect();
            Ok(vec![median(&mut v)])
        }
    }
}

/// Sample median; the midpoint of the two middle values for even counts.
pub fn median(values: &mut [f64]) -> f64 {
    let n = values.len();
    let mid = n / 2;
    let (lower, upper, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        upper
    } else {
        let below = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (below + upper)
    }
}

fn check_sets(s1: &SampleSet, s2: &SampleSet, n_r: usize) -> Result<()> {
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch(
            "sample sets differ in dimension".into(),
        ));
    }
    if n_r > s1.len() {
        return Err(Error::invalid(format!(
            "removal budget {n_r} exceeds the {} unwanted samples",
            s1.len()
        )));
    }
    Ok(())
}

fn combine(kept: &[&Vec<f64>], s2: &SampleSet, estimator: Estimator) -> Result<Vec<f64>> {
    let desired: Vec<&Vec<f64>> = s2.points.iter().collect();
    let nu_hat = estimate(&desired, estimator)?;
    if kept.is_empty() {
        return Ok(nu_hat);
    }
    let mu_hat = estimate(kept, estimator)?;
    let (n1, n2) = (kept.len() as f64, s2.len() as f64);
    Ok(mu_hat
        .iter()
        .zip(&nu_hat)
        .map(|(m, v)| (n1 * m + n2 * v) / (n1 + n2))
        .collect())
}

/// Drops `n_r` unwanted samples chosen uniformly without replacement, then
/// returns (n₁′·μ̂₁′ + n₂·ν̂₁)/(n₁′ + n₂).
pub fn random_removal_fit_with<R: Rng + ?Sized>(
    s1: &SampleSet,
    s2: &SampleSet,
    n_r: usize,
    estimator: Estimator,
    rng: &mut R,
) -> Result<Vec<f64>> {
    check_sets(s1, s2, n_r)?;
    let mut removed = vec![false; s1.len()];
    for i in index::sample(rng, s1.len(), n_r) {
        removed[i] = true;
    }
    let kept: Vec<&Vec<f64>> = s1
        .points
        .iter()
        .zip(&removed)
        .filter(|(_, r)| !**r)
        .map(|(p, _)| p)
        .collect();
    combine(&kept, s2, estimator)
}

/// [`random_removal_fit_with`] driven by a ChaCha8 stream seeded from `seed`.
pub fn random_removal_fit(
    s1: &SampleSet,
    s2: &SampleSet,
    n_r: usize,
    estimator: Estimator,
    seed: u64,
) -> Result<Vec<f64>> {
    random_removal_fit_with(s1, s2, n_r, estimator, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Drops the `n_r` unwanted samples farthest from ν̂₁ (Mahalanobis distance
/// under `cov` when given, Euclidean otherwise; among equal scores the lower index is dropped first),
/// then fits as in [`random_removal_fit`].
pub fn selective_removal_fit(
    s1: &SampleSet,
    s2: &SampleSet,
    n_r: usize,
    estimator: Estimator,
    cov: Option<&Covariance>,
) -> Result<Vec<f64>> {
    check_sets(s1, s2, n_r)?;
    let desired: Vec<&Vec<f64>> = s2.points.iter().collect();
    let nu_hat = estimate(&desired, estimator)?;
    let whitener = cov.map(|c| c.whitener()).transpose()?;
    let scores: Vec<f64> = s1
        .points
        .iter()
        .map(|p| match &whitener {
            Some(w) => w.distance(p, &nu_hat),
            None => Ok(p
                .iter()
                .zip(&nu_hat)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()),
        })
        .collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..s1.len()).collect();
    order.sort_by(|&i, &j| scores[j].total_cmp(&scores[i]).then(i.cmp(&j)));
    let mut kept_idx = order[n_r..].to_vec();
    kept_idx.sort_unstable();
    let kept: Vec<&Vec<f64>> = kept_idx.iter().map(|&i| &s1.points[i]).collect();
    combine(&kept, s2, estimator)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[f64]) -> SampleSet {
        SampleSet::scalar(v).unwrap()
    }

    #[test]
    fn random_weighted_mean_arithmetic() {
        let mu = random_removal_fit(
            &s(&[5.0, 5.0, 5.0]),
            &s(&[0.0, 0.0]),
            1,
            Estimator::WeightedMean,
            3,
        )
        .unwrap();
        assert_eq!(mu, vec![2.5]);
    }

    #[test]
    fn full_budget_returns_desired_estimate() {
        let mu = random_removal_fit(
            &s(&[5.0, 7.0]),
            &s(&[1.0, 2.0]),
            2,
            Estimator::WeightedMean,
            0,
        )
        .unwrap();
        assert_eq!(mu, vec![1.5]);
        let mu = selective_removal_fit(
            &s(&[5.0, 7.0]),
            &s(&[1.0, 2.0, 9.0]),
            2,
            Estimator::WeightedMedian,
            None,
        )
        .unwrap();
        assert_eq!(mu, vec![2.0]);
    }

    #[test]
    fn selective_drops_farthest() {
        let mu = selective_removal_fit(
            &s(&[10.0, 1.0]),
            &s(&[0.0]),
            1,
            Estimator::WeightedMean,
            None,
        )
        .unwrap();
        assert_eq!(mu, vec![0.5]);
    }

    #[test]
    fn selective_ties_drop_lower_index_first() {
        // Both points sit at distance 1 from ν̂₁ = 0; ties sort by ascending
        // index, so index 0 is among the n_r dropped first.
        let mu = selective_removal_fit(
            &s(&[-1.0, 1.0]),
            &s(&[0.0]),
            1,
            Estimator::WeightedMean,
            None,
        )
        .unwrap();
        assert_eq!(mu, vec![0.5]);
    }

    #[test]
    fn no_removal_paths_agree() {
        let (a, b) = (s(&[3.0, 4.0, 8.0]), s(&[0.0, 1.0]));
        let r = random_removal_fit(&a, &b, 0, Estimator::WeightedMean, 9).unwrap();
        let sel = selective_removal_fit(&a, &b, 0, Estimator::WeightedMean, None).unwrap();
        assert_eq!(r, sel);
    }

    #[test]
    fn median_conventions() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 3.0, 2.0]), 2.5);
    }

    #[test]
    fn errors() {
        assert!(random_removal_fit(&s(&[1.0]), &s(&[0.0]), 2, Estimator::WeightedMean, 0).is_err());
        let two_d = SampleSet::new(vec![vec![0.0, 1.0]]).unwrap();
        assert!(random_removal_fit(&two_d, &s(&[0.0]), 0, Estimator::WeightedMean, 0).is_err());
        assert!(random_removal_fit(&two_d, &two_d, 0, Estimator::WeightedMedian, 0).is_err());
        assert!(SampleSet::new(vec![]).is_err());
    }
}
