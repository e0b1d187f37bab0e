//! Monte Carlo coverage of the removal certificates.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::algorithms::{
    random_removal_certificate, random_removal_fit_with, selective_removal_certificate,
    selective_removal_fit, Algorithm, CertificateInput, DataModel, Estimator, RemovalCertificate,
    SampleSet, Variant,
};
use crate::tof_core::NoiseModel;
use crate::{Error, Result};

/// Populations the trials draw from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum TrialModel {
    /// N(μ₁, σ²I) and N(ν₁, σ²I).
    Gaussian {
        unwanted: Vec<f64>,
        desired: Vec<f64>,
        sigma: f64,
    },
    /// μ₁ + X and ν₁ + X on ℝ.
    Location {
        unwanted: f64,
        desired: f64,
        noise: NoiseModel,
    },
}

impl TrialModel {
    fn centers(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            TrialModel::Gaussian {
                unwanted, desired, ..
            } => (unwanted.clone(), desired.clone()),
            TrialModel::Location {
                unwanted, desired, ..
            } => (vec![*unwanted], vec![*desired]),
        }
    }

    fn data_model(&self) -> DataModel {
        match self {
            TrialModel::Gaussian {
                unwanted, sigma, ..
            } => DataModel::Gaussian {
                sigma: *sigma,
                d: unwanted.len() as u64,
            },
            TrialModel::Location { noise, .. } => DataModel::Location {
                noise: noise.clone(),
            },
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            TrialModel::Gaussian {
                unwanted,
                desired,
                sigma,
            } => {
                if unwanted.is_empty() || unwanted.len() != desired.len() {
                    return Err(Error::DimensionMismatch(
                        "centers must share a positive dimension".into(),
                    ));
                }
                if unwanted.iter().chain(desired).any(|v| !v.is_finite()) {
                    return Err(Error::invalid("centers must be finite"));
                }
                if !(*sigma > 0.0 && sigma.is_finite()) {
                    return Err(Error::invalid("sigma must be positive and finite"));
                }
                Ok(())
            }
            TrialModel::Location {
                unwanted,
                desired,
                noise,
            } => {
                if !(unwanted.is_finite() && desired.is_finite()) {
                    return Err(Error::invalid("centers must be finite"));
                }
                noise.validate()
            }
        }
    }

    /// Certificate separation: ‖μ₁ − ν₁‖/σ, or |μ₁ − ν₁| for location noise.
    fn separation(&self) -> f64 {
        let (m, v) = self.centers();
        euclidean(&m, &v) / self.data_model().unit_scale()
    }

    fn draw(&self, center: &[f64], n: u64, rng: &mut ChaCha8Rng) -> Result<SampleSet> {
        let points = (0..n)
            .map(|_| match self {
                TrialModel::Gaussian { sigma, .. } => center
                    .iter()
                    .map(|c| {
                        let z: f64 = StandardNormal.sample(rng);
                        c + sigma * z
                    })
                    .collect::<Vec<f64>>(),
                TrialModel::Location { noise, .. } => vec![center[0] + noise.sample(rng)],
            })
            .collect();
        SampleSet::new(points)
    }
}

fn euclidean(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// One coverage experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub model: TrialModel,
    pub n1: u64,
    pub n2: u64,
    pub n_r: u64,
    pub delta: f64,
    pub algorithm: Algorithm,
    /// Which selective certificate to test; ignored for random removal.
    pub variant: Variant,
    pub estimator: Estimator,
    pub trials: u64,
    pub seed: u64,
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        self.model.validate()?;
        self.certificate_input().validate()
    }

    fn certificate_input(&self) -> CertificateInput {
        CertificateInput {
            n1: self.n1,
            n2: self.n2,
            n_r: self.n_r,
            delta: self.delta,
            separation: self.model.separation(),
            model: self.model.data_model(),
            estimator: self.estimator,
        }
    }

    /// The certificate the trials are scored against.
    pub fn certificate(&self) -> Result<RemovalCertificate> {
        let input = self.certificate_input();
        match (self.algorithm, self.variant) {
            (Algorithm::Random, _) => random_removal_certificate(&input),
            (Algorithm::Selective, Variant::Displayed) => {
                Ok(selective_removal_certificate(&input)?.displayed)
            }
            (Algorithm::Selective, Variant::Tight) => {
                Ok(selective_removal_certificate(&input)?.tight)
            }
        }
    }
}

/// Order statistics of per-trial distances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub min: f64,
    pub q05: f64,
    pub q50: f64,
    pub q95: f64,
    pub max: f64,
}

impl Quantiles {
    fn of(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        let at = |p: f64| {
            let pos = p * (values.len() - 1) as f64;
            let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
            values[lo] + (pos - lo as f64) * (values[hi] - values[lo])
        };
        Quantiles {
            min: values[0],
            q05: at(0.05),
            q50: at(0.5),
            q95: at(0.95),
            max: values[values.len() - 1],
        }
    }
}

/// Event frequencies of a coverage experiment.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialReport {
    pub config: TrialConfig,
    pub certificate: RemovalCertificate,
    /// α_M in data units; the removal event is ‖μ − μ₁‖ ≥ this.
    pub removal_threshold: f64,
    /// ε_m in data units; the preservation event is ‖μ − ν₁‖ ≤ this.
    pub preservation_threshold: f64,
    /// α_M ≤ 0: the removal event holds trivially.
    pub removal_vacuous: bool,
    pub trials: u64,
    pub removal_frequency: f64,
    pub preservation_frequency: f64,
    pub joint_frequency: f64,
    /// ‖μ − μ₁‖ across trials.
    pub removal_distance: Quantiles,
    /// ‖μ − ν₁‖ across trials.
    pub preservation_distance: Quantiles,
    /// Wall-clock time; not serialized so reports compare byte for byte.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl TrialReport {
    /// True when the joint frequency reaches the certified 1 − δ.
    pub fn covers(&self) -> bool {
        self.joint_frequency >= 1.0 - self.config.delta
    }
}

/// Runs `config.trials` independent experiments. Trial i draws from a ChaCha8
/// stream seeded by the root seed on stream i, so results do not depend on
/// execution order.
pub fn run_trials(config: &TrialConfig) -> Result<TrialReport> {
    config.validate()?;
    let start = Instant::now();
    let certificate = config.certificate()?;
    let scale = config.model.data_model().unit_scale();
    let removal_threshold = certificate.alpha_max * scale;
    let preservation_threshold = certificate.epsilon_min * scale;
    let (mu1, nu1) = config.model.centers();
    let n_r =
        usize::try_from(config.n_r).map_err(|_| Error::invalid("n_r does not fit in memory"))?;
    let (mut removal, mut preservation, mut joint) = (0u64, 0u64, 0u64);
    let (mut to_unwanted, mut to_desired) = (Vec::new(), Vec::new());
    for trial in 0..config.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(trial);
        let s1 = config.model.draw(&mu1, config.n1, &mut rng)?;
        let s2 = config.model.draw(&nu1, config.n2, &mut rng)?;
        let mu = match config.algorithm {
            Algorithm::Random => {
                random_removal_fit_with(&s1, &s2, n_r, config.estimator, &mut rng)?
            }
            Algorithm::Selective => selective_removal_fit(&s1, &s2, n_r, config.estimator, None)?,
        };
        let (du, dv) = (euclidean(&mu, &mu1), euclidean(&mu, &nu1));
        let removed = du >= removal_threshold;
        let preserved = dv <= preservation_threshold;
        removal += removed as u64;
        preservation += preserved as u64;
        joint += (removed && preserved) as u64;
        to_unwanted.push(du);
        to_desired.push(dv);
    }
    let n = config.trials as f64;
    Ok(TrialReport {
        config: config.clone(),
        removal_vacuous: certificate.alpha_max <= 0.0,
        certificate,
        removal_threshold,
        preservation_threshold,
        trials: config.trials,
        removal_frequency: removal as f64 / n,
        preservation_frequency: preservation as f64 / n,
        joint_frequency: joint as f64 / n,
        removal_distance: Quantiles::of(to_unwanted),
        preservation_distance: Quantiles::of(to_desired),
        elapsed: start.elapsed(),
    })
}
