//! Special functions shared by every module: the standard normal law,
//! log-gamma, chi-square CDFs, discrete log-pmfs, and log-space helpers.

use libm::erfc;
use statrs::function::erf::erfc_inv;
use statrs::function::gamma::{gamma_lr, gamma_ur};

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Standard normal CDF Φ(x).
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Standard normal survival function 1 − Φ(x), accurate in the upper tail.
pub fn norm_sf(x: f64) -> f64 {
    0.5 * erfc(x / SQRT_2)
}

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x - LN_SQRT_2PI).exp()
}

/// Standard normal quantile Φ⁻¹(p).
pub fn norm_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    if p <= 0.5 {
        lower_quantile(p)
    } else {
        -lower_quantile(1.0 - p)
    }
}

/// Upper quantile Φ⁻¹(1 − q), accurate for small q.
pub fn norm_isf(q: f64) -> f64 {
    if q <= 0.0 {
        return f64::INFINITY;
    }
    if q >= 1.0 {
        return f64::NEG_INFINITY;
    }
    if q <= 0.5 {
        -lower_quantile(q)
    } else {
        lower_quantile(1.0 - q)
    }
}

// Φ⁻¹(p) = −√2·erfc⁻¹(2p) for p ≤ ½, polished by one Newton step.
fn lower_quantile(p: f64) -> f64 {
    let x = -SQRT_2 * erfc_inv(2.0 * p);
    newton_polish(x, p)
}

fn newton_polish(x: f64, p: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let dens = norm_pdf(x);
    if dens <= 0.0 {
        return x;
    }
    x - (norm_cdf(x) - p) / dens
}

/// Natural log of Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Central chi-square CDF with `k` degrees of freedom.
pub fn chi2_cdf(k: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    gamma_lr(0.5 * k, 0.5 * x)
}

/// Central chi-square survival function with `k` degrees of freedom.
pub fn chi2_sf(k: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    gamma_ur(0.5 * k, 0.5 * x)
}

/// log P(X = k) for X ~ Poisson(rate); `k` may be non-integer (Γ extension).
pub fn poisson_ln_pmf(k: f64, rate: f64) -> f64 {
    k * rate.ln() - rate - ln_gamma(k + 1.0)
}

/// log P(X = k) for X ~ Binomial(n, p).
pub fn binomial_ln_pmf(k: u64, n: u64, p: f64) -> f64 {
    let (k, n) = (k as f64, n as f64);
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
        + k * p.ln()
        + (n - k) * (-p).ln_1p()
}

/// log(eᵃ + eᵇ) without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// log(eᵃ − eᵇ) for a ≥ b; returns −∞ when the difference vanishes.
pub fn log_sub_exp(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    if b >= a {
        return f64::NEG_INFINITY;
    }
    a + (-(b - a).exp()).ln_1p()
}

/// log(1 − eˣ) for x ≤ 0, accurate on both ends.
pub fn log1m_exp(x: f64) -> f64 {
    if x >= 0.0 {
        return f64::NEG_INFINITY;
    }
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from 50-digit arithmetic.
    #[test]
    fn normal_cdf_reference_values() {
        assert!((norm_cdf(-1.0) - 0.158_655_253_931_457_05).abs() < 1e-16);
        assert!((norm_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-15);
        assert!((norm_sf(10.0) / 7.619_853_024_160_527e-24 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn normal_quantile_reference_values() {
        assert!((norm_quantile(0.975) - 1.959_963_984_540_054).abs() < 1e-14);
        assert!((norm_isf(0.05) - 1.644_853_626_951_472_2).abs() < 1e-14);
        assert!((norm_isf(1e-20) - 9.262_340_089_798_408).abs() < 1e-12);
        assert!((norm_quantile(0.5)).abs() < 1e-16);
    }

    #[test]
    fn quantile_round_trip() {
        for i in 1..1000 {
            let p = i as f64 / 1000.0;
            assert!((norm_cdf(norm_quantile(p)) - p).abs() < 1e-15);
        }
    }

    #[test]
    fn ln_gamma_reference_values() {
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-14);
        assert!((ln_gamma(1e300) / 6.897_755_278_982_137e302 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn log_space_helpers() {
        assert!((log_add_exp(1f64.ln(), 2f64.ln()) - 3f64.ln()).abs() < 1e-15);
        assert!((log_sub_exp(3f64.ln(), 1f64.ln()) - 2f64.ln()).abs() < 1e-15);
        assert!((log1m_exp(-1e-20) - (1e-20f64).ln()).abs() < 1e-10);
        assert!((log1m_exp(-50.0) + (-50f64).exp()).abs() < 1e-30);
    }

    #[test]
    fn poisson_pmf_sums_to_one() {
        let s: f64 = (0..60).map(|k| poisson_ln_pmf(k as f64, 4.5).exp()).sum();
        assert!((s - 1.0).abs() < 1e-14);
    }
}
