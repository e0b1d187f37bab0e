//! Regions of shift families: Gaussian, log-concave location, white noise,
//! Hilbert-space Gaussians, and their multi-population variants.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    ball_classification, check_levels, pareto_samples, Classification, Covariance, Family, Metric,
    RegionParams, RegionResult, MEMBERSHIP_TOL,
};
use crate::{Error, Result};

fn ball_region(
    family: Family,
    metric: Metric,
    unwanted: &[f64],
    desired: &[f64],
    alpha: f64,
    epsilon: f64,
) -> Result<RegionResult> {
    check_levels(alpha, epsilon)?;
    if unwanted.iter().chain(desired).any(|v| !v.is_finite()) {
        return Err(Error::invalid("parameters must be finite"));
    }
    let delta = metric.distance(unwanted, desired)?;
    Ok(RegionResult {
        family,
        classification: ball_classification(delta, alpha, epsilon),
        delta: Some(delta),
        params: RegionParams::Ball {
            metric,
            unwanted: unwanted.to_vec(),
            desired: desired.to_vec(),
            alpha,
            epsilon,
        },
        pareto_samples: pareto_samples(delta, epsilon),
    })
}

/// Means μ with ‖μ − μ₁‖_Σ ≥ α and ‖μ − ν₁‖_Σ ≤ ε, in Mahalanobis distance.
pub fn gaussian_region(
    unwanted: &[f64],
    desired: &[f64],
    cov: &Covariance,
    alpha: f64,
    epsilon: f64,
) -> Result<RegionResult> {
    cov.whitener()?;
    ball_region(
        Family::Gaussian,
        Metric::Mahalanobis { cov: cov.clone() },
        unwanted,
        desired,
        alpha,
        epsilon,
    )
}

/// ‖f − g‖ in L²[0, 1] by composite trapezoid on a uniform grid.
pub(crate) fn trapezoid_l2(f: &[f64], g: &[f64]) -> f64 {
    let sq: Vec<f64> = f.iter().zip(g).map(|(a, b)| (a - b) * (a - b)).collect();
    let h = 1.0 / (sq.len() - 1) as f64;
    let inner: f64 = sq[1..sq.len() - 1].iter().sum();
    (h * (inner + 0.5 * (sq[0] + sq[sq.len() - 1]))).sqrt()
}

/// Drift functions h with ‖h − f‖ ≥ α and ‖h − g‖ ≤ ε, for f and g sampled on
/// the same uniform grid of [0, 1].
pub fn whitenoise_region(
    unwanted: &[f64],
    desired: &[f64],
    alpha: f64,
    epsilon: f64,
) -> Result<RegionResult> {
    ball_region(
        Family::WhiteNoise,
        Metric::Trapezoid,
        unwanted,
        desired,
        alpha,
        epsilon,
    )
}

/// Coefficient sequences h with Σ (h_j − μ₁ⱼ)²/λ_j ≥ α² and Σ (h_j − ν₁ⱼ)²/λ_j ≤ ε².
pub fn hilbert_region(
    eigenvalues: &[f64],
    unwanted: &[f64],
    desired: &[f64],
    alpha: f64,
    epsilon: f64,
) -> Result<RegionResult> {
    if eigenvalues.is_empty() {
        return Err(Error::invalid("spectrum must be non-empty"));
    }
    if eigenvalues.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
        return Err(Error::invalid("eigenvalues must be positive and finite"));
    }
    let metric = Metric::Spectral {
        eigenvalues: eigenvalues.to_vec(),
    };
    ball_region(Family::Hilbert, metric, unwanted, desired, alpha, epsilon)
}

/// Removes every open interval (c − r, c + r) from the closed interval [lo, hi].
fn subtract_open(lo: f64, hi: f64, holes: &[(f64, f64)]) -> Vec<[f64; 2]> {
    let mut holes: Vec<(f64, f64)> = holes
        .iter()
        .filter(|(_, r)| *r > 0.0)
        .map(|&(c, r)| (c - r, c + r))
        .collect();
    holes.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut pieces = Vec::new();
    let mut start = lo;
    for (a, b) in holes {
        if b <= start {
            continue;
        }
        if a > hi {
            break;
        }
        if a >= start {
            pieces.push([start, a]);
        }
        start = start.max(b);
        if start > hi {
            return pieces;
        }
    }
    if start <= hi {
        pieces.push([start, hi]);
    }
    pieces
}

/// Centers x with |x − μ₁| ≥ α and |x − ν₁| ≤ ε. The region depends only on
/// the shifts, so it is the same for every log-concave noise law.
///
/// When the α-interval around μ₁ sits strictly inside the ε-interval the
/// region splits into two pieces and is reported as an `IntervalSet`.
pub fn location1d_region(
    unwanted: f64,
    desired: f64,
    alpha: f64,
    epsilon: f64,
) -> Result<RegionResult> {
    check_levels(alpha, epsilon)?;
    if !(unwanted.is_finite() && desired.is_finite()) {
        return Err(Error::invalid("centers must be finite"));
    }
    let delta = (unwanted - desired).abs();
    let (lo, hi) = (desired - epsilon, desired + epsilon);
    let (classification, intervals) = match ball_classification(delta, alpha, epsilon) {
        Classification::Empty => (Classification::Empty, vec![]),
        Classification::FullBall => (Classification::FullInterval, vec![[lo, hi]]),
        _ => {
            let mut pieces = subtract_open(lo, hi, &[(unwanted, alpha)]);
            if pieces.is_empty() {
                // α = Δ + ε up to rounding: only the far endpoint survives.
                let far = if desired >= unwanted { hi } else { lo };
                pieces.push([far, far]);
            }
            let class = if pieces.len() == 1 {
                Classification::SubInterval
            } else {
                Classification::IntervalSet
            };
            (class, pieces)
        }
    };
    Ok(RegionResult {
        family: Family::Location,
        classification,
        delta: Some(delta),
        params: RegionParams::Intervals { intervals },
        pareto_samples: pareto_samples(delta, epsilon),
    })
}

/// Centers x with |x − μᵢ| ≥ αᵢ for every unwanted population and
/// |x − νⱼ| ≤ εⱼ for every desired one.
pub fn multi_region_1d(
    unwanted: &[f64],
    alpha: &[f64],
    desired: &[f64],
    epsilon: &[f64],
) -> Result<RegionResult> {
    if unwanted.is_empty() || desired.is_empty() {
        return Err(Error::invalid("both population lists must be non-empty"));
    }
    if unwanted.len() != alpha.len() || desired.len() != epsilon.len() {
        return Err(Error::DimensionMismatch(
            "each population needs one level".into(),
        ));
    }
    for &a in alpha {
        check_levels(a, 0.0)?;
    }
    for &e in epsilon {
        check_levels(0.0, e)?;
    }
    if unwanted.iter().chain(desired).any(|v| !v.is_finite()) {
        return Err(Error::invalid("centers must be finite"));
    }
    let lo = desired
        .iter()
        .zip(epsilon)
        .map(|(v, e)| v - e)
        .fold(f64::NEG_INFINITY, f64::max);
    let hi = desired
        .iter()
        .zip(epsilon)
        .map(|(v, e)| v + e)
        .fold(f64::INFINITY, f64::min);
    let intervals = if lo > hi {
        vec![]
    } else {
        let holes: Vec<(f64, f64)> = unwanted
            .iter()
            .copied()
            .zip(alpha.iter().copied())
            .collect();
        subtract_open(lo, hi, &holes)
    };
    let classification = if intervals.is_empty() {
        Classification::Empty
    } else {
        Classification::IntervalSet
    };
    Ok(RegionResult {
        family: Family::MultiLocation,
        classification,
        delta: None,
        params: RegionParams::Intervals { intervals },
        pareto_samples: vec![],
    })
}

/// Populations and levels of a multi-population Gaussian region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiGaussianSpec {
    pub unwanted: Vec<Vec<f64>>,
    pub alpha: Vec<f64>,
    pub desired: Vec<Vec<f64>>,
    pub epsilon: Vec<f64>,
    pub cov: Covariance,
}

impl MultiGaussianSpec {
    fn validate(&self) -> Result<()> {
        if self.unwanted.len() != self.alpha.len() || self.desired.len() != self.epsilon.len() {
            return Err(Error::DimensionMismatch(
                "each population needs one level".into(),
            ));
        }
        if self.desired.is_empty() {
            return Err(Error::invalid(
                "at least one desired population is required",
            ));
        }
        let d = self.cov.dim();
        if self
            .unwanted
            .iter()
            .chain(&self.desired)
            .any(|c| c.len() != d)
        {
            return Err(Error::DimensionMismatch(format!(
                "centers must have dimension {d}"
            )));
        }
        for &a in &self.alpha {
            check_levels(a, 0.0)?;
        }
        for &e in &self.epsilon {
            check_levels(0.0, e)?;
        }
        self.cov.whitener().map(|_| ())
    }
}

/// Exact membership: Mahalanobis distance ≥ αᵢ from every unwanted center and
/// ≤ εⱼ from every desired center.
pub fn multi_gaussian_member(x: &[f64], spec: &MultiGaussianSpec) -> Result<bool> {
    spec.validate()?;
    let w = spec.cov.whitener()?;
    for (c, &a) in spec.unwanted.iter().zip(&spec.alpha) {
        if w.distance(x, c)? < a - MEMBERSHIP_TOL * a.max(1.0) {
            return Ok(false);
        }
    }
    for (c, &e) in spec.desired.iter().zip(&spec.epsilon) {
        if w.distance(x, c)? > e + MEMBERSHIP_TOL * e.max(1.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

// Members kept in the report; the count of all hits is reported separately.
const MAX_REPORTED_MEMBERS: usize = 1000;

/// Rejection-samples the region from the intersection of the desired balls'
/// bounding boxes in whitened coordinates.
///
/// An empty box proves the region empty. Otherwise finding no member is not
/// evidence of emptiness.
pub fn multi_gaussian_sample_region(
    spec: &MultiGaussianSpec,
    draws: u64,
    seed: u64,
) -> Result<RegionResult> {
    spec.validate()?;
    let w = spec.cov.whitener()?;
    let d = spec.cov.dim();
    let mut lo = vec![f64::NEG_INFINITY; d];
    let mut hi = vec![f64::INFINITY; d];
    for (c, &e) in spec.desired.iter().zip(&spec.epsilon) {
        let z = w.whiten(c)?;
        for k in 0..d {
            lo[k] = lo[k].max(z[k] - e);
            hi[k] = hi[k].min(z[k] + e);
        }
    }
    let box_empty = lo.iter().zip(&hi).any(|(l, h)| l > h);
    let mut members = Vec::new();
    let mut found = 0u64;
    if !box_empty {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut z = vec![0.0; d];
        for _ in 0..draws {
            for k in 0..d {
                z[k] = lo[k] + (hi[k] - lo[k]) * rng.random::<f64>();
            }
            let x = w.unwhiten(&z)?;
            if multi_gaussian_member(&x, spec)? {
                found += 1;
                if members.len() < MAX_REPORTED_MEMBERS {
                    members.push(x);
                }
            }
        }
    }
    Ok(RegionResult {
        family: Family::MultiGaussian,
        classification: if box_empty {
            Classification::Empty
        } else {
            Classification::SampledSet
        },
        delta: None,
        params: RegionParams::Sampled {
            spec: spec.clone(),
            draws: if box_empty { 0 } else { draws },
            found,
            members,
            emptiness_certified: box_empty,
        },
        pareto_samples: vec![],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_examples() {
        let id2 = Covariance::identity(2).unwrap();
        let r = gaussian_region(&[3.0, 0.0], &[0.0, 0.0], &id2, 1.0, 1.0).unwrap();
        assert_eq!(r.classification, Classification::FullBall);
        assert_eq!(r.delta, Some(3.0));
        let r = gaussian_region(&[1.0, 1.0], &[1.0, 1.0], &id2, 0.5, 0.2).unwrap();
        assert_eq!(r.classification, Classification::Empty);
        // Boundary α = Δ + ε is feasible; a hair above is not.
        let r = gaussian_region(&[3.0, 0.0], &[0.0, 0.0], &id2, 4.0, 1.0).unwrap();
        assert_eq!(r.classification, Classification::AnnularCap);
        assert!(r.contains(&[-1.0, 0.0]).unwrap());
        let r = gaussian_region(&[3.0, 0.0], &[0.0, 0.0], &id2, 4.0 + 1e-6, 1.0).unwrap();
        assert!(r.is_empty());
        assert!(gaussian_region(&[3.0], &[0.0, 0.0], &id2, 1.0, 1.0).is_err());
    }

    #[test]
    fn location_examples() {
        let r = location1d_region(0.0, 5.0, 2.0, 1.0).unwrap();
        assert_eq!(r.classification, Classification::FullInterval);
        assert_eq!(r.intervals(), &[[4.0, 6.0]]);
        let r = location1d_region(0.0, 3.0, 3.5, 1.0).unwrap();
        assert_eq!(r.classification, Classification::SubInterval);
        assert_eq!(r.intervals(), &[[3.5, 4.0]]);
        let r = location1d_region(3.0, 0.0, 3.5, 1.0).unwrap();
        assert_eq!(r.intervals(), &[[-1.0, -0.5]]);
        let r = location1d_region(1.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(r.classification, Classification::FullInterval);
        assert_eq!(r.intervals(), &[[1.0, 1.0]]);
    }

    #[test]
    fn location_hole_inside_interval_splits() {
        let r = location1d_region(0.0, 0.5, 0.1, 2.0).unwrap();
        assert_eq!(r.classification, Classification::IntervalSet);
        assert_eq!(r.intervals(), &[[-1.5, -0.1], [0.1, 2.5]]);
    }

    #[test]
    fn multi_1d_examples() {
        // [max(−2, −1), min(2, 3)] minus (4, 6).
        let r = multi_region_1d(&[5.0], &[1.0], &[0.0, 1.0], &[2.0, 2.0]).unwrap();
        assert_eq!(r.intervals(), &[[-1.0, 2.0]]);
        let r = multi_region_1d(&[0.0], &[2.0], &[0.0], &[1.0]).unwrap();
        assert!(r.is_empty());
        // Two separated holes leave a gap between them.
        let r = multi_region_1d(&[-2.0, 2.0], &[1.0, 1.0], &[0.0], &[5.0]).unwrap();
        assert_eq!(r.intervals(), &[[-5.0, -3.0], [-1.0, 1.0], [3.0, 5.0]]);
        assert!(multi_region_1d(&[], &[], &[0.0], &[1.0]).is_err());
    }

    #[test]
    fn whitenoise_quadrature() {
        let m = 4097;
        let t: Vec<f64> = (0..m).map(|i| i as f64 / (m - 1) as f64).collect();
        let f: Vec<f64> = t
            .iter()
            .map(|x| (2.0 * std::f64::consts::PI * x).sin())
            .collect();
        let zero = vec![0.0; m];
        let r = whitenoise_region(&f, &zero, 0.1, 0.1).unwrap();
        assert!((r.delta.unwrap() - 0.5f64.sqrt()).abs() < 1e-6);
        let c = vec![0.7; m];
        assert!(
            (whitenoise_region(&c, &zero, 0.1, 0.1)
                .unwrap()
                .delta
                .unwrap()
                - 0.7)
                .abs()
                < 1e-8
        );
        // h = g: removal side decides.
        let r = whitenoise_region(&f, &zero, 0.5, 0.0).unwrap();
        assert!(r.contains(&zero).unwrap());
        let r = whitenoise_region(&f, &zero, 0.8, 0.0).unwrap();
        assert!(!r.contains(&zero).unwrap());
        assert!(whitenoise_region(&f, &zero[1..], 0.5, 0.0).is_err());
    }

    #[test]
    fn hilbert_examples() {
        let r = hilbert_region(&[4.0, 1.0], &[2.0, 0.0], &[0.0, 0.0], 0.5, 0.5).unwrap();
        assert_eq!(r.delta, Some(1.0));
        let r = hilbert_region(&[1.0, 1.0], &[1.0, 1.0], &[1.0, 1.0], 0.6, 0.5).unwrap();
        assert!(r.is_empty());
        assert!(hilbert_region(&[1.0, 0.0], &[1.0, 1.0], &[1.0, 1.0], 0.6, 0.5).is_err());
        assert!(hilbert_region(&[1.0], &[1.0, 1.0], &[1.0, 1.0], 0.6, 0.5).is_err());
    }

    fn spec(
        unwanted: Vec<Vec<f64>>,
        alpha: Vec<f64>,
        desired: Vec<Vec<f64>>,
        epsilon: Vec<f64>,
    ) -> MultiGaussianSpec {
        MultiGaussianSpec {
            unwanted,
            alpha,
            desired,
            epsilon,
            cov: Covariance::identity(2).unwrap(),
        }
    }

    #[test]
    fn multi_gaussian_annulus() {
        let s = spec(
            vec![vec![0.0, 0.0]],
            vec![1.0],
            vec![vec![0.0, 0.0]],
            vec![2.0],
        );
        assert!(multi_gaussian_member(&[1.5, 0.0], &s).unwrap());
        assert!(!multi_gaussian_member(&[0.5, 0.0], &s).unwrap());
        let r = multi_gaussian_sample_region(&s, 1000, 7).unwrap();
        assert_eq!(r.classification, Classification::SampledSet);
        assert!(r.contains(&[1.5, 0.0]).unwrap());
        assert_eq!(r, multi_gaussian_sample_region(&s, 1000, 7).unwrap());
    }

    #[test]
    fn disjoint_desired_balls_have_no_members() {
        let s = spec(
            vec![],
            vec![],
            vec![vec![0.0, 0.0], vec![10.0, 0.0]],
            vec![1.0, 1.0],
        );
        let r = multi_gaussian_sample_region(&s, 100_000, 1).unwrap();
        let RegionParams::Sampled {
            found,
            emptiness_certified,
            ..
        } = r.params
        else {
            panic!()
        };
        assert_eq!(found, 0);
        assert!(emptiness_certified);
    }
}
