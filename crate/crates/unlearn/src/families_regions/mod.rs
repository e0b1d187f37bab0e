//! Feasible regions and Pareto frontiers.
//!
//! A region collects the family members p with T(p, p₁) ≤ f_d (removal at
//! level α) and T(p, q₁) ≥ f_c (preservation at level ε). The baselines are
//! the family's own pairs: shifts by α and ε for shift families, P(1) against
//! P(α) and P(ε) for Poisson, and B(n, ½) against B(n, α) and B(n, ε) for
//! Binomial.

mod counts;
mod covariance;
mod shift;

use serde::{Deserialize, Serialize};

use crate::tof_core::NoiseModel;
use crate::{Error, Result};

pub use counts::{binomial_region, poisson_pareto, poisson_region};
pub use covariance::{Covariance, Whitener};
pub use shift::{
    gaussian_region, hilbert_region, location1d_region, multi_gaussian_member,
    multi_gaussian_sample_region, multi_region_1d, whitenoise_region, MultiGaussianSpec,
};

/// Slack applied by membership predicates.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Preservation levels at which `pareto_samples` are reported, together with
/// the instance's own ε.
pub const PARETO_SAMPLE_EPS: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 4.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Empty,
    FullBall,
    AnnularCap,
    FullInterval,
    SubInterval,
    IntervalSet,
    PoissonInterval,
    SampledSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Gaussian,
    Location,
    MultiLocation,
    MultiGaussian,
    Poisson,
    Binomial,
    WhiteNoise,
    Hilbert,
}

/// Norm in which shift-family distances are measured.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Metric {
    Mahalanobis {
        cov: Covariance,
    },
    /// L²[0, 1] by composite trapezoid on a uniform grid.
    Trapezoid,
    /// Σ h_j² / λ_j.
    Spectral {
        eigenvalues: Vec<f64>,
    },
}

impl Metric {
    fn check_len(&self, len: usize) -> Result<()> {
        let expected = match self {
            Metric::Mahalanobis { cov } => cov.dim(),
            Metric::Trapezoid => {
                return if len >= 2 {
                    Ok(())
                } else {
                    Err(Error::invalid("grid needs at least 2 points"))
                }
            }
            Metric::Spectral { eigenvalues } => eigenvalues.len(),
        };
        if len != expected {
            return Err(Error::DimensionMismatch(format!(
                "expected length {expected}, got {len}"
            )));
        }
        Ok(())
    }

    /// Distance between two parameters of matching length.
    pub fn distance(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch(format!(
                "lengths {} and {} differ",
                x.len(),
                y.len()
            )));
        }
        self.check_len(x.len())?;
        match self {
            Metric::Mahalanobis { cov } => cov.whitener()?.distance(x, y),
            Metric::Trapezoid => Ok(shift::trapezoid_l2(x, y)),
            Metric::Spectral { eigenvalues } => Ok(x
                .iter()
                .zip(y)
                .zip(eigenvalues)
                .map(|((a, b), l)| (a - b) * (a - b) / l)
                .sum::<f64>()
                .sqrt()),
        }
    }
}

/// Geometry needed to answer membership queries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionParams {
    /// {x : d(x, unwanted) ≥ α, d(x, desired) ≤ ε}.
    Ball {
        metric: Metric,
        unwanted: Vec<f64>,
        desired: Vec<f64>,
        alpha: f64,
        epsilon: f64,
    },
    /// A union of closed intervals, ordered and disjoint.
    Intervals { intervals: Vec<[f64; 2]> },
    /// Members found by rejection sampling; an empty list certifies nothing
    /// unless `emptiness_certified` is set.
    Sampled {
        spec: MultiGaussianSpec,
        draws: u64,
        found: u64,
        members: Vec<Vec<f64>>,
        emptiness_certified: bool,
    },
}

/// A feasible region with its classification and separation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionResult {
    pub family: Family,
    pub classification: Classification,
    /// Separation of the unwanted and desired parameters in the family's
    /// natural units; absent for multi-population regions.
    pub delta: Option<f64>,
    pub params: RegionParams,
    /// (ε, largest feasible α) pairs for families with a scalar frontier.
    pub pareto_samples: Vec<[f64; 2]>,
}

impl RegionResult {
    pub fn is_empty(&self) -> bool {
        self.classification == Classification::Empty
    }

    /// The region's intervals; empty for ball and sampled regions.
    pub fn intervals(&self) -> &[[f64; 2]] {
        match &self.params {
            RegionParams::Intervals { intervals } => intervals,
            _ => &[],
        }
    }

    /// Whether candidate parameter `x` lies in the region.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        match &self.params {
            RegionParams::Ball {
                metric,
                unwanted,
                desired,
                alpha,
                epsilon,
            } => {
                let removal = metric.distance(x, unwanted)?;
                let preserve = metric.distance(x, desired)?;
                let slack = MEMBERSHIP_TOL * alpha.max(*epsilon).max(1.0);
                Ok(removal >= alpha - slack && preserve <= epsilon + slack)
            }
            RegionParams::Intervals { intervals } => {
                let [v] = x else {
                    return Err(Error::DimensionMismatch(
                        "interval regions take a scalar".into(),
                    ));
                };
                Ok(intervals.iter().any(|&[lo, hi]| {
                    let slack = MEMBERSHIP_TOL * lo.abs().max(hi.abs()).max(1.0);
                    *v >= lo - slack && *v <= hi + slack
                }))
            }
            RegionParams::Sampled { spec, .. } => multi_gaussian_member(x, spec),
        }
    }

    /// Largest α with a non-empty region at preservation level `epsilon`,
    /// for families whose frontier is α = Δ + ε.
    pub fn pareto(&self, epsilon: f64) -> Option<f64> {
        match self.family {
            Family::Gaussian | Family::Location | Family::WhiteNoise | Family::Hilbert => {
                self.delta.map(|d| d + epsilon)
            }
            _ => None,
        }
    }
}

/// Shift-family classification shared by Gaussian, white-noise and Hilbert
/// regions.
pub(crate) fn ball_classification(delta: f64, alpha: f64, epsilon: f64) -> Classification {
    if alpha > delta + epsilon {
        Classification::Empty
    } else if delta - epsilon >= alpha {
        Classification::FullBall
    } else {
        Classification::AnnularCap
    }
}

pub(crate) fn pareto_samples(delta: f64, epsilon: f64) -> Vec<[f64; 2]> {
    let mut eps: Vec<f64> = PARETO_SAMPLE_EPS.to_vec();
    eps.push(epsilon);
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    eps.into_iter().map(|e| [e, delta + e]).collect()
}

pub(crate) fn check_levels(alpha: f64, epsilon: f64) -> Result<()> {
    if !(alpha >= 0.0 && alpha.is_finite() && epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid(
            "alpha and epsilon must be non-negative and finite",
        ));
    }
    Ok(())
}

/// A set of α values: the interval between `lo` and `hi`, each end open or closed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl AlphaInterval {
    pub fn contains(&self, a: f64) -> bool {
        let above = if self.lo_open {
            a > self.lo
        } else {
            a >= self.lo
        };
        let below = if self.hi_open {
            a < self.hi
        } else {
            a <= self.hi
        };
        above && below
    }

    fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && (self.lo_open || self.hi_open))
    }
}

/// The unwanted/desired pair of one family, as accepted by the CLI.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Gaussian {
        unwanted: Vec<f64>,
        desired: Vec<f64>,
        cov: Covariance,
    },
    Location {
        unwanted: f64,
        desired: f64,
        noise: NoiseModel,
    },
    Poisson {
        unwanted: f64,
        desired: f64,
    },
    Binomial {
        n: u64,
        unwanted: f64,
        desired: f64,
    },
    WhiteNoise {
        unwanted: Vec<f64>,
        desired: Vec<f64>,
    },
    Hilbert {
        eigenvalues: Vec<f64>,
        unwanted: Vec<f64>,
        desired: Vec<f64>,
    },
}

impl FamilySpec {
    /// Checks the pair parameters by building one region from them.
    pub fn validate(&self) -> Result<()> {
        match self {
            FamilySpec::Location { noise, .. } => noise.validate(),
            // Poisson levels must differ from 1.
            FamilySpec::Poisson { .. } => self.region(2.0, 0.5).map(|_| ()),
            _ => self.region(0.5, 0.5).map(|_| ()),
        }
    }

    /// The feasible region at removal level α and preservation level ε.
    pub fn region(&self, alpha: f64, epsilon: f64) -> Result<RegionResult> {
        match self {
            FamilySpec::Gaussian {
                unwanted,
                desired,
                cov,
            } => gaussian_region(unwanted, desired, cov, alpha, epsilon),
            FamilySpec::Location {
                unwanted,
                desired,
                noise,
            } => {
                noise.validate()?;
                location1d_region(*unwanted, *desired, alpha, epsilon)
            }
            FamilySpec::Poisson { unwanted, desired } => {
                poisson_region(*unwanted, *desired, alpha, epsilon)
            }
            FamilySpec::Binomial {
                n,
                unwanted,
                desired,
            } => binomial_region(*n, *unwanted, *desired, alpha, epsilon),
            FamilySpec::WhiteNoise { unwanted, desired } => {
                whitenoise_region(unwanted, desired, alpha, epsilon)
            }
            FamilySpec::Hilbert {
                eigenvalues,
                unwanted,
                desired,
            } => hilbert_region(eigenvalues, unwanted, desired, alpha, epsilon),
        }
    }

    /// All α with a non-empty region at preservation level ε.
    pub fn pareto(&self, epsilon: f64) -> Result<Vec<AlphaInterval>> {
        match self {
            FamilySpec::Poisson { unwanted, desired } => {
                poisson_pareto(*unwanted, *desired, epsilon)
            }
            FamilySpec::Binomial { .. } => Err(Error::Unsupported(
                "the Binomial frontier has no closed form; scan binomial_region".into(),
            )),
            _ => {
                let region = self.region(0.0, epsilon)?;
                let hi = region
                    .pareto(epsilon)
                    .expect("shift families have a scalar frontier");
                Ok(vec![AlphaInterval {
                    lo: 0.0,
                    hi,
                    lo_open: false,
                    hi_open: false,
                }])
            }
        }
    }
}
