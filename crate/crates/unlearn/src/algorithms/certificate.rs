//! High-probability (α_M, ε_m) certificates for both removal algorithms.
//!
//! Each certificate is a union bound over two concentration events, so every
//! event is charged δ/2. Certificates take the true separation Δ as input.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::fit::Estimator;
use crate::concentration::{
    dkw_half_budget, gamma_gaussian, gamma_laplace_median, gamma_noise, DistanceCdf,
};
use crate::special::{norm_cdf, norm_quantile};
use crate::tof_core::NoiseModel;
use crate::{Error, Result};

/// Data model the certificate is issued for.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum DataModel {
    /// N(μ, σ²I_d); separation and levels are in units of σ.
    Gaussian { sigma: f64, d: u64 },
    /// μ + X on ℝ with symmetric log-concave X; separation and levels are in
    /// the data's own units.
    Location { noise: NoiseModel },
}

impl DataModel {
    pub fn dim(&self) -> u64 {
        match self {
            DataModel::Gaussian { d, .. } => *d,
            DataModel::Location { .. } => 1,
        }
    }

    /// Factor converting certificate levels into data units.
    pub fn unit_scale(&self) -> f64 {
        match self {
            DataModel::Gaussian { sigma, .. } => *sigma,
            DataModel::Location { .. } => 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            DataModel::Gaussian { sigma, d } => {
                if !(*sigma > 0.0 && sigma.is_finite()) {
                    return Err(Error::invalid("sigma must be positive and finite"));
                }
                if *d == 0 {
                    return Err(Error::invalid("d must be at least 1"));
                }
                Ok(())
            }
            DataModel::Location { noise } => noise.validate(),
        }
    }
}

/// Inputs shared by both certificates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateInput {
    pub n1: u64,
    pub n2: u64,
    pub n_r: u64,
    pub delta: f64,
    /// True separation ‖μ₁ − ν₁‖ (divided by σ for the Gaussian model).
    #[serde(rename = "Delta")]
    pub separation: f64,
    pub model: DataModel,
    pub estimator: Estimator,
}

impl CertificateInput {
    pub fn validate(&self) -> Result<()> {
        if self.n1 == 0 || self.n2 == 0 {
            return Err(Error::invalid("n1 and n2 must be at least 1"));
        }
        if self.n_r > self.n1 {
            return Err(Error::invalid(format!(
                "n_r = {} exceeds n1 = {}",
                self.n_r, self.n1
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::invalid("delta must lie in (0, 1)"));
        }
        if !(self.separation >= 0.0 && self.separation.is_finite()) {
            return Err(Error::invalid("Delta must be non-negative and finite"));
        }
        self.model.validate()?;
        if self.estimator == Estimator::WeightedMedian
            && !matches!(
                self.model,
                DataModel::Location {
                    noise: NoiseModel::Laplace { .. }
                }
            )
        {
            return Err(Error::Unsupported(
                "the median estimator is certified for Laplace location noise only".into(),
            ));
        }
        Ok(())
    }

    pub fn n1_kept(&self) -> u64 {
        self.n1 - self.n_r
    }

    /// Concentration radius of the estimator on n samples at level `level`.
    fn radius(&self, n: u64, level: f64) -> Result<f64> {
        match (&self.model, self.estimator) {
            (DataModel::Gaussian { d, .. }, Estimator::WeightedMean) => {
                gamma_gaussian(n, *d, level)
            }
            (DataModel::Location { noise }, Estimator::WeightedMean) => {
                gamma_noise(noise, n, level)
            }
            (
                DataModel::Location {
                    noise: NoiseModel::Laplace { scale },
                },
                Estimator::WeightedMedian,
            ) => Ok(scale * gamma_laplace_median(n, level)?),
            _ => Err(Error::Unsupported("estimator and model combination".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Random,
    Selective,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Displayed,
    Tight,
}

/// A certified pair (α_M, ε_m) with α_M + ε_m = Δ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemovalCertificate {
    pub algorithm: Algorithm,
    pub variant: Variant,
    #[serde(flatten)]
    pub input: CertificateInput,
    pub d: u64,
    pub epsilon_min: f64,
    pub alpha_max: f64,
    /// Every intermediate constant, keyed by name.
    pub constants: BTreeMap<String, f64>,
}

impl RemovalCertificate {
    fn new(
        algorithm: Algorithm,
        variant: Variant,
        input: &CertificateInput,
        epsilon_min: f64,
        constants: BTreeMap<String, f64>,
    ) -> Self {
        RemovalCertificate {
            algorithm,
            variant,
            input: input.clone(),
            d: input.model.dim(),
            epsilon_min,
            alpha_max: input.separation - epsilon_min,
            constants,
        }
    }
}

fn keep_only_desired(
    algorithm: Algorithm,
    variant: Variant,
    input: &CertificateInput,
) -> Result<RemovalCertificate> {
    // Only the desired-sample event remains, so it may use all of δ.
    let g2 = input.radius(input.n2, input.delta)?;
    let constants = BTreeMap::from([
        ("gamma_n2".to_string(), g2),
        ("event_level".to_string(), input.delta),
    ]);
    Ok(RemovalCertificate::new(
        algorithm, variant, input, g2, constants,
    ))
}

/// ε_m(R) = wΔ + (n₁′γ(n₁′) + n₂γ(n₂))/(n₁′ + n₂) with w = n₁′/(n₁′ + n₂).
pub fn random_removal_certificate(input: &CertificateInput) -> Result<RemovalCertificate> {
    input.validate()?;
    let kept = input.n1_kept();
    if kept == 0 {
        return keep_only_desired(Algorithm::Random, Variant::Displayed, input);
    }
    let level = 0.5 * input.delta;
    let (g1, g2) = (input.radius(kept, level)?, input.radius(input.n2, level)?);
    let (k, n2) = (kept as f64, input.n2 as f64);
    let w = k / (k + n2);
    let epsilon = w * input.separation + (k * g1 + n2 * g2) / (k + n2);
    let constants = BTreeMap::from([
        ("gamma_n1_kept".to_string(), g1),
        ("gamma_n2".to_string(), g2),
        ("weight".to_string(), w),
        ("event_level".to_string(), level),
    ]);
    Ok(RemovalCertificate::new(
        Algorithm::Random,
        Variant::Displayed,
        input,
        epsilon,
        constants,
    ))
}

/// Both variants of the selective certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectiveCertificates {
    pub displayed: RemovalCertificate,
    pub tight: RemovalCertificate,
}

/// Quantile level n₁′/n₁ + √(ln(4/δ)/(2n₁)) at which the retained-distance
/// law is inverted.
pub fn selective_quantile_level(n1: u64, n_r: u64, delta: f64) -> Result<f64> {
    if n_r > n1 {
        return Err(Error::invalid(format!("n_r = {n_r} exceeds n1 = {n1}")));
    }
    Ok((n1 - n_r) as f64 / n1 as f64 + dkw_half_budget(n1, delta)?)
}

/// Inverse of t ↦ P[|X + Δ| ≤ t] for location noise X.
fn location_distance_inverse(noise: &NoiseModel, separation: f64, q: f64) -> f64 {
    let cdf = |t: f64| {
        if t <= 0.0 {
            0.0
        } else {
            (noise.cdf(t - separation) - noise.cdf(-t - separation)).max(0.0)
        }
    };
    let mut hi = separation + 1.0;
    while cdf(hi) < q {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if cdf(mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// ε_m(S) = w·F⁻¹(q) + 2γ(n₂) (displayed) or w·F⁻¹(q) + (1 + w)γ(n₂) (tight),
/// where F is the law of a retained unwanted sample's distance to ν₁.
pub fn selective_removal_certificate(input: &CertificateInput) -> Result<SelectiveCertificates> {
    input.validate()?;
    let kept = input.n1_kept();
    if kept == 0 {
        return Ok(SelectiveCertificates {
            displayed: keep_only_desired(Algorithm::Selective, Variant::Displayed, input)?,
            tight: keep_only_desired(Algorithm::Selective, Variant::Tight, input)?,
        });
    }
    let q = selective_quantile_level(input.n1, input.n_r, input.delta)?;
    if q >= 1.0 {
        return Err(Error::Infeasible(format!(
            "quantile level n1'/n1 + d(n1, δ) = {q:.6} is not below 1; remove more samples"
        )));
    }
    let level = 0.5 * input.delta;
    let g2 = input.radius(input.n2, level)?;
    let radius = match &input.model {
        DataModel::Gaussian { d, .. } => DistanceCdf::new(input.separation, 1.0, *d)?.inverse(q)?,
        DataModel::Location { noise } => location_distance_inverse(noise, input.separation, q),
    };
    let (k, n2) = (kept as f64, input.n2 as f64);
    let w = k / (k + n2);
    let constants = BTreeMap::from([
        ("quantile_level".to_string(), q),
        ("distance_quantile".to_string(), radius),
        ("gamma_n2".to_string(), g2),
        ("weight".to_string(), w),
        ("event_level".to_string(), level),
    ]);
    let displayed = w * radius + 2.0 * g2;
    let tight = w * radius + (1.0 + w) * g2;
    Ok(SelectiveCertificates {
        displayed: RemovalCertificate::new(
            Algorithm::Selective,
            Variant::Displayed,
            input,
            displayed,
            constants.clone(),
        ),
        tight: RemovalCertificate::new(
            Algorithm::Selective,
            Variant::Tight,
            input,
            tight,
            constants,
        ),
    })
}

/// When selective removal certifies a smaller ε than random removal
/// (d = 1, σ = 1, tight selective bound).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub n1: u64,
    pub n2: u64,
    pub n_r: u64,
    pub delta: f64,
    /// 2γ(n₂) − γ(n₁′) at the certificates' per-event level.
    #[serde(rename = "A")]
    pub a: f64,
    /// The selective quantile level.
    pub q: f64,
    /// n₁Φ(A) + √(n₁·ln(2/δ)); feasibility needs n_r strictly above it.
    pub n_r_threshold: f64,
    /// n_r > `n_r_threshold`.
    pub feasible: bool,
    /// q < 1 − Φ(A), the weaker condition under which Δ_m is finite.
    pub quantile_feasible: bool,
    /// (A + Φ⁻¹(Φ(A) + q))/2, reported when `feasible`.
    #[serde(rename = "Delta_m")]
    pub delta_m: Option<f64>,
}

/// For Δ ≥ Δ_m the tight selective certificate is at most the random one.
pub fn comparison_threshold(n1: u64, n2: u64, n_r: u64, delta: f64) -> Result<ComparisonResult> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::invalid("n1 and n2 must be at least 1"));
    }
    if n_r >= n1 {
        return Err(Error::invalid(
            "comparison needs at least one retained unwanted sample (n_r < n1)",
        ));
    }
    let level = 0.5 * delta;
    let a = 2.0 * gamma_gaussian(n2, 1, level)? - gamma_gaussian(n1 - n_r, 1, level)?;
    let q = selective_quantile_level(n1, n_r, delta)?;
    let phi_a = norm_cdf(a);
    let n_r_threshold = n1 as f64 * phi_a + (n1 as f64 * (2.0 / delta).ln()).sqrt();
    let feasible = n_r as f64 > n_r_threshold;
    let quantile_feasible = phi_a + q < 1.0;
    let delta_m = feasible.then(|| 0.5 * (a + norm_quantile(phi_a + q)));
    Ok(ComparisonResult {
        n1,
        n2,
        n_r,
        delta,
        a,
        q,
        n_r_threshold,
        feasible,
        quantile_feasible,
        delta_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_input(n_r: u64, separation: f64) -> CertificateInput {
        CertificateInput {
            n1: 1000,
            n2: 1000,
            n_r,
            delta: 0.1,
            separation,
            model: DataModel::Gaussian { sigma: 1.0, d: 1 },
            estimator: Estimator::WeightedMean,
        }
    }

    #[test]
    fn random_reference_value() {
        let c = random_removal_certificate(&gaussian_input(500, 5.0)).unwrap();
        let g = |n: f64| {
            let l = (1.0f64 / 0.05).ln();
            (1.0 + 2.0 * l.sqrt() + 2.0 * l).sqrt() / n.sqrt()
        };
        let expected = 500.0 * 5.0 / 1500.0 + (500.0 * g(500.0) + 1000.0 * g(1000.0)) / 1500.0;
        assert!((c.epsilon_min - expected).abs() < 1e-14);
        assert!((c.epsilon_min - 1.783).abs() < 1e-3);
        assert_eq!(c.alpha_max + c.epsilon_min, 5.0);
    }

    #[test]
    fn selective_reference_value() {
        let s = selective_removal_certificate(&gaussian_input(900, 5.0)).unwrap();
        assert!(
            (s.tight.epsilon_min - 0.469).abs() < 1e-3,
            "{}",
            s.tight.epsilon_min
        );
        assert!(s.tight.epsilon_min < s.displayed.epsilon_min);
        assert_eq!(s.tight.alpha_max + s.tight.epsilon_min, 5.0);
    }

    #[test]
    fn selective_rejects_quantile_at_one() {
        assert!(matches!(
            selective_removal_certificate(&gaussian_input(0, 5.0)),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn keep_only_desired_uses_desired_radius() {
        let c = random_removal_certificate(&gaussian_input(1000, 5.0)).unwrap();
        assert_eq!(c.epsilon_min, gamma_gaussian(1000, 1, 0.1).unwrap());
    }

    #[test]
    fn location_gaussian_matches_structure() {
        // With Gaussian noise the location certificate is the Gaussian formula
        // with the exact two-sided quantile in place of the chi-square radius.
        let sigma = 2.0;
        let loc = CertificateInput {
            model: DataModel::Location {
                noise: NoiseModel::Gaussian { sigma },
            },
            separation: 5.0 * sigma,
            ..gaussian_input(500, 0.0)
        };
        let c = random_removal_certificate(&loc).unwrap();
        let g = |n: u64| sigma * crate::special::norm_isf(0.025) / (n as f64).sqrt();
        let expected = (500.0 * 10.0 + 500.0 * g(500) + 1000.0 * g(1000)) / 1500.0;
        assert!((c.epsilon_min - expected).abs() < 1e-12);
        let s = selective_removal_certificate(&CertificateInput { n_r: 900, ..loc }).unwrap();
        let gs = selective_removal_certificate(&gaussian_input(900, 5.0)).unwrap();
        let (rl, rg) = (
            s.tight.constants["distance_quantile"],
            gs.tight.constants["distance_quantile"],
        );
        assert!((rl - sigma * rg).abs() < 1e-9);
    }

    #[test]
    fn median_needs_laplace() {
        let input = CertificateInput {
            estimator: Estimator::WeightedMedian,
            ..gaussian_input(500, 5.0)
        };
        assert!(matches!(
            random_removal_certificate(&input),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn comparison_grid_feasibility() {
        let feasible: Vec<bool> = [1100, 1300, 1500, 1700, 1900]
            .iter()
            .map(|&n_r| {
                comparison_threshold(2000, 2000, n_r, 0.05)
                    .unwrap()
                    .feasible
            })
            .collect();
        assert_eq!(feasible, vec![false, true, true, true, true]);
    }

    #[test]
    fn comparison_matches_certificates() {
        for n_r in [1300u64, 1500, 1900] {
            let cmp = comparison_threshold(2000, 2000, n_r, 0.05).unwrap();
            let dm = cmp.delta_m.unwrap();
            // Δ_m can be negative when few unwanted samples are kept.
            let floor = dm.max(0.0);
            for sep in [floor, floor + 0.1, floor + 1.0, floor + 5.0] {
                let input = CertificateInput {
                    n1: 2000,
                    n2: 2000,
                    n_r,
                    delta: 0.05,
                    separation: sep,
                    model: DataModel::Gaussian { sigma: 1.0, d: 1 },
                    estimator: Estimator::WeightedMean,
                };
                let r = random_removal_certificate(&input).unwrap().epsilon_min;
                let s = selective_removal_certificate(&input)
                    .unwrap()
                    .tight
                    .epsilon_min;
                assert!(s <= r + 1e-12, "n_r={n_r} Δ={sep}: {s} > {r}");
            }
            if dm < 0.05 {
                continue;
            }
            // Just below Δ_m the order flips.
            let input = CertificateInput {
                n1: 2000,
                n2: 2000,
                n_r,
                delta: 0.05,
                separation: dm - 0.05,
                model: DataModel::Gaussian { sigma: 1.0, d: 1 },
                estimator: Estimator::WeightedMean,
            };
            let r = random_removal_certificate(&input).unwrap().epsilon_min;
            let s = selective_removal_certificate(&input)
                .unwrap()
                .tight
                .epsilon_min;
            assert!(s > r);
        }
    }
}
