//! Symmetric log-concave noise laws for one-dimensional location families.

use rand::distr::Open01;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::special::{norm_cdf, norm_isf, norm_quantile, norm_sf};
use crate::{Error, Result};

/// A symmetric noise law X = −X with log-concave density.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseModel {
    Gaussian { sigma: f64 },
    Laplace { scale: f64 },
    Uniform { half_width: f64 },
    Tabulated(TabulatedCdf),
}

/// A CDF given by monotone linear interpolation through `(t, cdf)` knots.
///
/// The table must start at F = 0 and end at F = 1, so the law has compact
/// support `[t₀, t_last]`, and it must be symmetric about zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct TabulatedCdf {
    t: Vec<f64>,
    cdf: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    t: Vec<f64>,
    cdf: Vec<f64>,
}

impl TryFrom<RawTable> for TabulatedCdf {
    type Error = Error;
    fn try_from(raw: RawTable) -> Result<Self> {
        TabulatedCdf::new(raw.t, raw.cdf)
    }
}

impl From<TabulatedCdf> for RawTable {
    fn from(tab: TabulatedCdf) -> Self {
        RawTable {
            t: tab.t,
            cdf: tab.cdf,
        }
    }
}

const SYMMETRY_TOL: f64 = 1e-9;

impl TabulatedCdf {
    pub fn new(t: Vec<f64>, cdf: Vec<f64>) -> Result<Self> {
        if t.len() != cdf.len() {
            return Err(Error::DimensionMismatch("t and cdf lengths differ".into()));
        }
        if t.len() < 2 {
            return Err(Error::invalid("tabulated CDF needs at least two knots"));
        }
        if t.iter().chain(&cdf).any(|v| !v.is_finite()) {
            return Err(Error::invalid("tabulated CDF has non-finite entries"));
        }
        if t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid(
                "tabulated abscissae must be strictly increasing",
            ));
        }
        if cdf.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("tabulated CDF must be strictly increasing"));
        }
        if cdf[0] != 0.0 || cdf[cdf.len() - 1] != 1.0 {
            return Err(Error::invalid("tabulated CDF must run from 0 to 1"));
        }
        let table = TabulatedCdf { t, cdf };
        table.check_symmetry()?;
        Ok(table)
    }

    fn check_symmetry(&self) -> Result<()> {
        if (self.cdf_at(0.0) - 0.5).abs() > SYMMETRY_TOL {
            return Err(Error::invalid("tabulated CDF must satisfy F(0) = 1/2"));
        }
        for &x in &self.t {
            if (self.cdf_at(-x) - (1.0 - self.cdf_at(x))).abs() > SYMMETRY_TOL {
                return Err(Error::invalid("tabulated CDF is not symmetric about 0"));
            }
        }
        Ok(())
    }

    pub fn knots(&self) -> (&[f64], &[f64]) {
        (&self.t, &self.cdf)
    }

    /// Right end of the support.
    pub fn half_width(&self) -> f64 {
        self.t[self.t.len() - 1]
    }

    fn cdf_at(&self, x: f64) -> f64 {
        let n = self.t.len();
        if x <= self.t[0] {
            return 0.0;
        }
        if x >= self.t[n - 1] {
            return 1.0;
        }
        let i = self.t.partition_point(|&v| v <= x);
        let (t0, t1) = (self.t[i - 1], self.t[i]);
        let (f0, f1) = (self.cdf[i - 1], self.cdf[i]);
        f0 + (f1 - f0) * (x - t0) / (t1 - t0)
    }

    fn quantile_at(&self, p: f64) -> f64 {
        let n = self.cdf.len();
        if p <= 0.0 {
            return self.t[0];
        }
        if p >= 1.0 {
            return self.t[n - 1];
        }
        let i = self.cdf.partition_point(|&v| v <= p).clamp(1, n - 1);
        let (t0, t1) = (self.t[i - 1], self.t[i]);
        let (f0, f1) = (self.cdf[i - 1], self.cdf[i]);
        let guess = t0 + (t1 - t0) * (p - f0) / (f1 - f0);
        if guess.is_finite() && (self.cdf_at(guess) - p).abs() <= 1e-14 {
            return guess;
        }
        // Interpolation lost accuracy; bisect inside the bracketing knots.
        let (mut lo, mut hi) = (t0, t1);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.cdf_at(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        let (name, v) = match self {
            NoiseModel::Gaussian { sigma } => ("sigma", *sigma),
            NoiseModel::Laplace { scale } => ("scale", *scale),
            NoiseModel::Uniform { half_width } => ("half_width", *half_width),
            NoiseModel::Tabulated(_) => return Ok(()),
        };
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::invalid(format!(
                "noise {name} must be positive and finite"
            )));
        }
        Ok(())
    }

    /// F(t).
    pub fn cdf(&self, t: f64) -> f64 {
        match self {
            NoiseModel::Gaussian { sigma } => norm_cdf(t / sigma),
            NoiseModel::Laplace { scale } => {
                if t < 0.0 {
                    0.5 * (t / scale).exp()
                } else {
                    1.0 - 0.5 * (-t / scale).exp()
                }
            }
            NoiseModel::Uniform { half_width } => {
                ((t + half_width) / (2.0 * half_width)).clamp(0.0, 1.0)
            }
            NoiseModel::Tabulated(tab) => tab.cdf_at(t),
        }
    }

    /// 1 − F(t), computed as F(−t) by symmetry.
    pub fn sf(&self, t: f64) -> f64 {
        match self {
            NoiseModel::Gaussian { sigma } => norm_sf(t / sigma),
            _ => self.cdf(-t),
        }
    }

    /// F⁻¹(p).
    pub fn quantile(&self, p: f64) -> f64 {
        match self {
            NoiseModel::Gaussian { sigma } => sigma * norm_quantile(p),
            NoiseModel::Laplace { scale } => {
                if p <= 0.5 {
                    scale * (2.0 * p).ln()
                } else {
                    -scale * (2.0 * (1.0 - p)).ln()
                }
            }
            NoiseModel::Uniform { half_width } => half_width * (2.0 * p - 1.0),
            NoiseModel::Tabulated(tab) => tab.quantile_at(p),
        }
    }

    /// F⁻¹(1 − q), accurate for small q.
    pub fn isf(&self, q: f64) -> f64 {
        match self {
            NoiseModel::Gaussian { sigma } => sigma * norm_isf(q),
            _ => -self.quantile(q),
        }
    }

    /// The half-width of a compact support, when there is one.
    pub fn support_half_width(&self) -> Option<f64> {
        match self {
            NoiseModel::Uniform { half_width } => Some(*half_width),
            NoiseModel::Tabulated(tab) => Some(tab.half_width()),
            _ => None,
        }
    }

    /// The Gaussian scale, when the law is Gaussian.
    pub fn gaussian_sigma(&self) -> Option<f64> {
        match self {
            NoiseModel::Gaussian { sigma } => Some(*sigma),
            _ => None,
        }
    }

    /// Draws one noise value.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            NoiseModel::Gaussian { sigma } => {
                let z: f64 = StandardNormal.sample(rng);
                sigma * z
            }
            NoiseModel::Laplace { scale } => {
                let u: f64 = rng.sample::<f64, _>(Open01) - 0.5;
                -scale * u.signum() * (-2.0 * u.abs()).ln_1p()
            }
            NoiseModel::Uniform { half_width } => half_width * (2.0 * rng.random::<f64>() - 1.0),
            NoiseModel::Tabulated(tab) => tab.quantile_at(rng.random::<f64>()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> TabulatedCdf {
        // Triangular density on [−1, 1].
        let t: Vec<f64> = (0..=40).map(|i| -1.0 + i as f64 / 20.0).collect();
        let cdf = t
            .iter()
            .map(|&x: &f64| {
                if x < 0.0 {
                    0.5 * (1.0 + x).powi(2)
                } else {
                    1.0 - 0.5 * (1.0 - x).powi(2)
                }
            })
            .collect();
        TabulatedCdf::new(t, cdf).unwrap()
    }

    fn models() -> Vec<NoiseModel> {
        vec![
            NoiseModel::Gaussian { sigma: 1.5 },
            NoiseModel::Laplace { scale: 0.7 },
            NoiseModel::Uniform { half_width: 2.0 },
            NoiseModel::Tabulated(triangle()),
        ]
    }

    #[test]
    fn symmetric_about_zero() {
        for m in models() {
            assert!((m.cdf(0.0) - 0.5).abs() < 1e-12);
            for i in 0..50 {
                let t = i as f64 * 0.04;
                assert!((m.cdf(-t) - (1.0 - m.cdf(t))).abs() < 1e-12, "{m:?} at {t}");
            }
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        for m in models() {
            for i in 1..100 {
                let p = i as f64 / 100.0;
                assert!((m.cdf(m.quantile(p)) - p).abs() < 1e-12, "{m:?} at {p}");
                assert!((m.isf(p) - m.quantile(1.0 - p)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rejects_asymmetric_table() {
        let err = TabulatedCdf::new(vec![-1.0, 0.0, 2.0], vec![0.0, 0.5, 1.0]).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn rejects_table_with_open_tails() {
        assert!(TabulatedCdf::new(vec![-1.0, 0.0, 1.0], vec![0.1, 0.5, 0.9]).is_err());
    }

    #[test]
    fn laplace_sampler_matches_cdf() {
        use rand::SeedableRng;
        let m = NoiseModel::Laplace { scale: 1.0 };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let n = 20000;
        let below = (0..n).filter(|_| m.sample(&mut rng) <= 1.0).count() as f64 / n as f64;
        assert!((below - m.cdf(1.0)).abs() < 0.01);
    }
}
