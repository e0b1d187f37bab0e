//! Checking an edited distribution against removal and preservation baselines.

use serde::{Deserialize, Serialize};

use super::curve::TradeoffCurve;
use super::noise::NoiseModel;
use super::order::{dominates, Verdict};
use crate::families_regions::Covariance;
use crate::{Error, Result};

/// A member of one of the supported parametric families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Distribution {
    Gaussian { mean: Vec<f64>, cov: Covariance },
    Location { center: f64, noise: NoiseModel },
    Poisson { rate: f64 },
    Binomial { n: u64, p: f64 },
}

impl Distribution {
    fn family(&self) -> &'static str {
        match self {
            Distribution::Gaussian { .. } => "gaussian",
            Distribution::Location { .. } => "location",
            Distribution::Poisson { .. } => "poisson",
            Distribution::Binomial { .. } => "binomial",
        }
    }
}

/// T(p, other) in closed form for two members of the same family.
pub fn pair_curve(p: &Distribution, other: &Distribution) -> Result<TradeoffCurve> {
    use Distribution as D;
    match (p, other) {
        (D::Gaussian { mean: m1, cov: c1 }, D::Gaussian { mean: m2, cov: c2 }) => {
            if c1 != c2 {
                return Err(Error::invalid("gaussian members must share one covariance"));
            }
            let mu = c1.whitener()?.distance(m1, m2)?;
            TradeoffCurve::gaussian(mu)
        }
        (
            D::Location {
                center: c1,
                noise: n1,
            },
            D::Location {
                center: c2,
                noise: n2,
            },
        ) => {
            if n1 != n2 {
                return Err(Error::invalid(
                    "location members must share one noise model",
                ));
            }
            TradeoffCurve::location(n1.clone(), (c1 - c2).abs())
        }
        (D::Poisson { rate: a }, D::Poisson { rate: b }) => TradeoffCurve::poisson(*a, *b),
        (D::Binomial { n: n1, p: a }, D::Binomial { n: n2, p: b }) => {
            if n1 != n2 {
                return Err(Error::invalid(
                    "binomial members must share the trial count",
                ));
            }
            TradeoffCurve::binomial(*n1, *a, *b)
        }
        _ => Err(Error::invalid(format!(
            "mixed families: {} and {}",
            p.family(),
            other.family()
        ))),
    }
}

/// Candidate p, unwanted populations p₁…p_k with removal baselines, and
/// desired populations q₁…q_l with preservation baselines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnlearningQuery {
    pub candidate: Distribution,
    pub unwanted: Vec<Distribution>,
    pub removal: Vec<TradeoffCurve>,
    pub desired: Vec<Distribution>,
    pub preservation: Vec<TradeoffCurve>,
}

impl UnlearningQuery {
    /// The single-population query (p, p₁, q₁, f_d, f_c).
    pub fn single(
        candidate: Distribution,
        unwanted: Distribution,
        desired: Distribution,
        removal: TradeoffCurve,
        preservation: TradeoffCurve,
    ) -> Self {
        UnlearningQuery {
            candidate,
            unwanted: vec![unwanted],
            removal: vec![removal],
            desired: vec![desired],
            preservation: vec![preservation],
        }
    }
}

/// Verdicts of every removal and preservation comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnlearningCheck {
    pub holds: bool,
    /// dominates(T(p, p₁ᵢ), f_dᵢ) for each unwanted population.
    pub removal_verdicts: Vec<Verdict>,
    /// dominates(T(p, q₁ⱼ), f_cⱼ) for each desired population.
    pub preservation_verdicts: Vec<Verdict>,
}

impl UnlearningCheck {
    pub fn removal_holds(&self) -> bool {
        self.removal_verdicts.iter().all(|v| v.is_le())
    }

    pub fn preservation_holds(&self) -> bool {
        self.preservation_verdicts.iter().all(|v| v.is_ge())
    }
}

/// Removal needs T(p, p₁) ≤ f_d and preservation needs T(p, q₁) ≥ f_c, for
/// every listed population.
pub fn check_unlearning(query: &UnlearningQuery) -> Result<UnlearningCheck> {
    if query.unwanted.len() != query.removal.len()
        || query.desired.len() != query.preservation.len()
    {
        return Err(Error::DimensionMismatch(
            "each population needs exactly one baseline".into(),
        ));
    }
    if query.unwanted.is_empty() && query.desired.is_empty() {
        return Err(Error::invalid("query lists no populations"));
    }
    let verdicts = |pops: &[Distribution], baselines: &[TradeoffCurve]| -> Result<Vec<Verdict>> {
        pops.iter()
            .zip(baselines)
            .map(|(pop, base)| {
                base.validate()?;
                Ok(dominates(&pair_curve(&query.candidate, pop)?, base))
            })
            .collect()
    };
    let removal_verdicts = verdicts(&query.unwanted, &query.removal)?;
    let preservation_verdicts = verdicts(&query.desired, &query.preservation)?;
    let mut check = UnlearningCheck {
        holds: false,
        removal_verdicts,
        preservation_verdicts,
    };
    check.holds = check.removal_holds() && check.preservation_holds();
    Ok(check)
}
