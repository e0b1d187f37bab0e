//! Shared covariance descriptor and its whitening transform.

use nalgebra::{Cholesky, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Common covariance of a shifted Gaussian family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Covariance {
    /// σ²·I_d.
    Isotropic { dim: usize, sigma: f64 },
    /// A dense d×d matrix stored row-major.
    Full { dim: usize, entries: Vec<f64> },
}

const SYMMETRY_TOL: f64 = 1e-12;

impl Covariance {
    pub fn isotropic(dim: usize, sigma: f64) -> Result<Self> {
        let c = Covariance::Isotropic { dim, sigma };
        c.whitener()?;
        Ok(c)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Covariance::isotropic(dim, 1.0)
    }

    pub fn full(dim: usize, entries: Vec<f64>) -> Result<Self> {
        let c = Covariance::Full { dim, entries };
        c.whitener()?;
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        match self {
            Covariance::Isotropic { dim, .. } | Covariance::Full { dim, .. } => *dim,
        }
    }

    /// Factorizes the covariance; fails unless it is symmetric positive definite.
    pub fn whitener(&self) -> Result<Whitener> {
        match self {
            Covariance::Isotropic { dim, sigma } => {
                if *dim == 0 {
                    return Err(Error::invalid("dimension must be at least 1"));
                }
                if !(*sigma > 0.0 && sigma.is_finite()) {
                    return Err(Error::NotPositiveDefinite);
                }
                Ok(Whitener::Scalar {
                    dim: *dim,
                    sigma: *sigma,
                })
            }
            Covariance::Full { dim, entries } => {
                let d = *dim;
                if d == 0 {
                    return Err(Error::invalid("dimension must be at least 1"));
                }
                if entries.len() != d * d {
                    return Err(Error::DimensionMismatch(format!(
                        "covariance has {} entries, expected {}",
                        entries.len(),
                        d * d
                    )));
                }
                let m = DMatrix::from_row_slice(d, d, entries);
                let scale = m.amax().max(1.0);
                for i in 0..d {
                    for j in 0..i {
                        if (m[(i, j)] - m[(j, i)]).abs() > SYMMETRY_TOL * scale {
                            return Err(Error::NotPositiveDefinite);
                        }
                    }
                }
                let chol = Cholesky::new(m).ok_or(Error::NotPositiveDefinite)?;
                Ok(Whitener::Cholesky(chol))
            }
        }
    }
}

/// Maps a vector v to Σ^{−1/2}-whitened coordinates (via the Cholesky factor L,
/// z = L⁻¹v, which preserves the Mahalanobis norm).
#[derive(Clone, Debug)]
pub enum Whitener {
    Scalar { dim: usize, sigma: f64 },
    Cholesky(Cholesky<f64, nalgebra::Dyn>),
}

impl Whitener {
    pub fn dim(&self) -> usize {
        match self {
            Whitener::Scalar { dim, .. } => *dim,
            Whitener::Cholesky(c) => c.l_dirty().nrows(),
        }
    }

    fn check(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector has length {}, covariance has dimension {}",
                v.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// z = L⁻¹ v.
    pub fn whiten(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check(v)?;
        Ok(match self {
            Whitener::Scalar { sigma, .. } => v.iter().map(|x| x / sigma).collect(),
            Whitener::Cholesky(c) => {
                let l = c.l();
                let z = l
                    .solve_lower_triangular(&DVector::from_column_slice(v))
                    .expect("Cholesky factor has a positive diagonal");
                z.iter().copied().collect()
            }
        })
    }

    /// v = L z.
    pub fn unwhiten(&self, z: &[f64]) -> Result<Vec<f64>> {
        self.check(z)?;
        Ok(match self {
            Whitener::Scalar { sigma, .. } => z.iter().map(|x| x * sigma).collect(),
            Whitener::Cholesky(c) => (c.l() * DVector::from_column_slice(z))
                .iter()
                .copied()
                .collect(),
        })
    }

    /// ‖Σ^{−1/2}(x − y)‖₂.
    pub fn distance(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch("vectors differ in length".into()));
        }
        let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        Ok(norm(&self.whiten(&diff)?))
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
