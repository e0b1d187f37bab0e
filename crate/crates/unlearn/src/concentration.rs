//! Finite-sample constants used by the removal certificates.
//!
//! Each function returns a raw bound at failure probability `delta`. Splitting
//! a total failure budget across several events is the caller's job (see
//! [`crate::algorithms`]).

use serde::{Deserialize, Serialize};

use crate::special::{chi2_cdf, chi2_sf, norm_cdf, norm_isf, poisson_ln_pmf};
use crate::tof_core::NoiseModel;
use crate::{Error, Result};

/// Sample count, dimension, and failure probability of one tail event.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailBudget {
    pub n: u64,
    pub d: u64,
    pub delta: f64,
}

impl TailBudget {
    pub fn new(n: u64, d: u64, delta: f64) -> Result<Self> {
        check_count(n, "n")?;
        check_count(d, "d")?;
        check_delta(delta)?;
        Ok(TailBudget { n, d, delta })
    }
}

fn check_count(v: u64, what: &str) -> Result<()> {
    if v == 0 {
        return Err(Error::invalid(format!("{what} must be at least 1")));
    }
    Ok(())
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    Ok(())
}

/// Radius γ with P[‖mean of n iid N(0, I_d)‖ ≥ γ] ≤ δ:
/// √(d + 2√(d·ln(1/δ)) + 2·ln(1/δ)) / √n.
pub fn gamma_gaussian(n: u64, d: u64, delta: f64) -> Result<f64> {
    TailBudget::new(n, d, delta)?;
    let (d, l) = (d as f64, (1.0 / delta).ln());
    Ok((d + 2.0 * (d * l).sqrt() + 2.0 * l).sqrt() / (n as f64).sqrt())
}

/// Uniform deviation of an empirical CDF: P[sup |F̂_n − F| > ε] ≤ δ for
/// ε = √(ln(2/δ) / (2n)).
pub fn dkw(n: u64, delta: f64) -> Result<f64> {
    check_count(n, "n")?;
    check_delta(delta)?;
    Ok(((2.0 / delta).ln() / (2.0 * n as f64)).sqrt())
}

/// The selective certificate's d(n, δ) = √(ln(4/δ) / (2n)), i.e. [`dkw`] at δ/2.
pub fn dkw_half_budget(n: u64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    dkw(n, 0.5 * delta)
}

/// Radius γ with P[|mean of n iid noise draws| ≥ γ] ≤ δ for the tabulated
/// noise laws: Gaussian σ·Φ⁻¹(1 − δ/2)/√n, Uniform and bounded support
/// a·√(2n·ln(2/δ))/n, Laplace b·(2√(n·ln(2/δ)) + ln(2/δ))/n.
pub fn gamma_noise(noise: &NoiseModel, n: u64, delta: f64) -> Result<f64> {
    check_count(n, "n")?;
    check_delta(delta)?;
    noise.validate()?;
    let nf = n as f64;
    let l = (2.0 / delta).ln();
    Ok(match noise {
        NoiseModel::Gaussian { sigma } => sigma * norm_isf(0.5 * delta) / nf.sqrt(),
        NoiseModel::Laplace { scale } => scale * (2.0 * (nf * l).sqrt() + l) / nf,
        NoiseModel::Uniform { .. } | NoiseModel::Tabulated(_) => {
            let a = noise.support_half_width().ok_or_else(|| {
                Error::Unsupported("tabulated noise without a registered support bound".into())
            })?;
            a * (2.0 * nf * l).sqrt() / nf
        }
    })
}

/// Radius for the sample median of n iid standard Laplace draws:
/// −ln(1 − √((2/n)·ln(2/δ))), valid for n > 2·ln(4/δ).
///
/// Any median between the two middle order statistics is covered: a median
/// ≥ t forces at least ⌈n/2⌉ draws ≥ t, which is the event Hoeffding bounds.
pub fn gamma_laplace_median(n: u64, delta: f64) -> Result<f64> {
    check_count(n, "n")?;
    check_delta(delta)?;
    let nf = n as f64;
    if nf <= 2.0 * (4.0 / delta).ln() {
        return Err(Error::Infeasible(format!(
            "median bound needs n > 2 ln(4/δ) = {:.4}, got n = {n}",
            2.0 * (4.0 / delta).ln()
        )));
    }
    let s = ((2.0 / nf) * (2.0 / delta).ln()).sqrt();
    Ok(-(-s).ln_1p())
}

/// Law of ‖σZ + m‖₂ with Z ~ N(0, I_d) and ‖m‖ = σ·Δ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceCdf {
    pub separation: f64,
    pub sigma: f64,
    pub d: u64,
}

// The mixture stops once the remaining Poisson weight is below this fraction
// of the smaller of the two accumulated tails.
const MIXTURE_TOL: f64 = 1e-17;

impl DistanceCdf {
    pub fn new(separation: f64, sigma: f64, d: u64) -> Result<Self> {
        if !(separation >= 0.0 && separation.is_finite()) {
            return Err(Error::invalid("separation must be non-negative and finite"));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::invalid("sigma must be positive and finite"));
        }
        check_count(d, "d")?;
        Ok(DistanceCdf {
            separation,
            sigma,
            d,
        })
    }

    /// F₁(t) = P[‖σZ + m‖ ≤ t].
    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let (s, delta) = (t / self.sigma, self.separation);
        if self.d == 1 {
            return (norm_cdf(s - delta) - norm_cdf(-s - delta)).max(0.0);
        }
        noncentral_chi2_cdf(self.d as f64, delta * delta, s * s)
    }

    /// F₁⁻¹(q) by bisection to machine precision.
    pub fn inverse(&self, q: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&q) {
            return Err(Error::invalid(format!(
                "quantile level must lie in [0, 1), got {q}"
            )));
        }
        if q == 0.0 {
            return Ok(0.0);
        }
        let mut hi = self.sigma * (self.separation + (self.d as f64).sqrt() + 40.0);
        while self.cdf(hi) < q {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid) < q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(hi)
    }
}

/// P[χ²_k(λ) ≤ x] as a Poisson(λ/2) mixture of central chi-square CDFs.
pub fn noncentral_chi2_cdf(k: f64, lambda: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if lambda == 0.0 {
        return chi2_cdf(k, x);
    }
    let half = 0.5 * lambda;
    let (mut lower, mut upper) = (0.0f64, 0.0f64);
    let mut j = 0u64;
    loop {
        let w = poisson_ln_pmf(j as f64, half).exp();
        let dof = k + 2.0 * j as f64;
        lower += w * chi2_cdf(dof, x);
        upper += w * chi2_sf(dof, x);
        // Past the mode the Poisson weights shrink at least geometrically
        // with ratio half / (j + 1), which bounds the remaining mass.
        let ratio = half / (j + 1) as f64;
        if ratio < 1.0 {
            let rest = w * ratio / (1.0 - ratio);
            if rest <= MIXTURE_TOL * lower.min(upper) || rest < f64::MIN_POSITIVE {
                break;
            }
        }
        if j > 100_000 {
            break;
        }
        j += 1;
    }
    if lower <= upper {
        lower.clamp(0.0, 1.0)
    } else {
        (1.0 - upper).clamp(0.0, 1.0)
    }
}

/// F₁(t) for ‖σZ + m‖ with ‖m‖ = σ·Δ in dimension d.
pub fn f1_cdf(t: f64, separation: f64, sigma: f64, d: u64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::invalid("t must be non-negative"));
    }
    Ok(DistanceCdf::new(separation, sigma, d)?.cdf(t))
}

/// F₁⁻¹(q) for q ∈ [0, 1).
pub fn f1_inv(q: f64, separation: f64, sigma: f64, d: u64) -> Result<f64> {
    DistanceCdf::new(separation, sigma, d)?.inverse(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_radius_limits_and_scaling() {
        let g = gamma_gaussian(1, 1, 1.0 - 1e-15).unwrap();
        assert!((g - 1.0).abs() < 1e-7);
        let (a, b) = (
            gamma_gaussian(100, 5, 0.05).unwrap(),
            gamma_gaussian(400, 5, 0.05).unwrap(),
        );
        assert!((a / b - 2.0).abs() < 1e-14);
        assert!(gamma_gaussian(10, 1, 0.0).is_err());
    }

    #[test]
    fn gaussian_radius_monotone() {
        let g = |n, d, delta| gamma_gaussian(n, d, delta).unwrap();
        assert!(g(100, 2, 0.1) > g(200, 2, 0.1));
        assert!(g(100, 3, 0.1) > g(100, 2, 0.1));
        assert!(g(100, 2, 0.05) > g(100, 2, 0.1));
    }

    #[test]
    fn dkw_conventions_agree() {
        let a = dkw_half_budget(150, 0.1).unwrap();
        let b = ((4.0f64 / 0.1).ln() / 300.0).sqrt();
        assert!((a - b).abs() < 1e-16);
        assert!(dkw(100, 0.01).unwrap() > dkw(100, 0.1).unwrap());
        assert!(dkw(1 << 40, 0.1).unwrap() < 1e-5);
    }

    #[test]
    fn gaussian_noise_row_is_exact_quantile() {
        let g = gamma_noise(&NoiseModel::Gaussian { sigma: 1.0 }, 1, 0.05).unwrap();
        assert!((g - 1.959_963_984_540_054).abs() < 1e-14);
    }

    #[test]
    fn laplace_row_asymptotics() {
        let (n, delta) = (1u64 << 40, 0.1);
        let g = gamma_noise(&NoiseModel::Laplace { scale: 1.0 }, n, delta).unwrap();
        let ratio = g * (n as f64).sqrt() / (2.0 * (2.0f64 / delta).ln().sqrt());
        assert!((ratio - 1.0).abs() < 1e-5);
    }

    #[test]
    fn median_bound_domain() {
        let delta = 0.1;
        let boundary = (2.0 * (4.0f64 / delta).ln()).ceil() as u64;
        assert!(gamma_laplace_median(boundary - 1, delta).is_err());
        assert!(gamma_laplace_median(boundary, delta).is_ok());
        // Large n: ≈ √((2/n) ln(2/δ)), below the mean's √((4/n) ln(2/δ)).
        let n = 1u64 << 30;
        let med = gamma_laplace_median(n, delta).unwrap();
        let mean = gamma_noise(&NoiseModel::Laplace { scale: 1.0 }, n, delta).unwrap();
        assert!(((med / ((2.0 / n as f64) * (2.0f64 / delta).ln()).sqrt()) - 1.0).abs() < 1e-4);
        assert!(med < mean);
    }

    #[test]
    fn f1_reference_values() {
        // Central folded normal: 2Φ(t) − 1.
        let v = f1_cdf(1.0, 0.0, 1.0, 1).unwrap();
        assert!((v - (2.0 * norm_cdf(1.0) - 1.0)).abs() < 1e-15);
        // Φ(0) − Φ(−10).
        assert!((f1_cdf(5.0, 5.0, 1.0, 1).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(f1_cdf(0.0, 2.0, 1.0, 3).unwrap(), 0.0);
    }

    #[test]
    fn noncentral_matches_reference() {
        // 40-digit mpmath evaluation of the Poisson mixture.
        let cases = [
            (3.0, 1.0, 4.0, 0.602_455_971_929_707_5),
            (10.0, 25.0, 30.0, 0.349_694_735_173_444_1),
            (2.0, 9.0, 1.0, 0.010_829_449_821_547_85),
        ];
        for (k, lam, x, expected) in cases {
            let v = noncentral_chi2_cdf(k, lam, x);
            assert!((v - expected).abs() < 1e-12, "k={k} λ={lam} x={x}: {v}");
        }
    }

    #[test]
    fn f1_round_trip() {
        for d in [1u64, 3, 10] {
            for sep in [0.0, 1.0, 5.0] {
                for q in [0.01, 0.3, 0.5, 0.9, 0.999] {
                    let t = f1_inv(q, sep, 1.3, d).unwrap();
                    assert!((f1_cdf(t, sep, 1.3, d).unwrap() - q).abs() < 1e-12);
                }
                for t in [0.5, 2.0, 7.0] {
                    let q = f1_cdf(t, sep, 1.0, d).unwrap();
                    if q > 1e-12 && q < 1.0 - 1e-9 {
                        assert!((f1_inv(q, sep, 1.0, d).unwrap() - t).abs() < 1e-8);
                    }
                }
            }
        }
        assert!(f1_inv(1.0, 1.0, 1.0, 1).is_err());
    }
}
