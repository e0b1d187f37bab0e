//! Distributional unlearning toolkit.
//!
//! * [`tof_core`]: trade-off functions of hypothesis tests, their algebra,
//!   Blackwell ordering, and the exact Neyman–Pearson oracle for discrete
//!   pairs.
//! * [`families_regions`]: exact feasible regions and Pareto frontiers for
//!   Gaussian, log-concave location, Poisson, Binomial, white-noise, and
//!   Hilbert-space families.
//! * [`concentration`]: finite-sample tail constants used by certificates.
//! * [`algorithms`]: random and selective removal with high-probability
//!   `(α_M, ε_m)` certificates.
//! * [`verify`]: Monte Carlo coverage trials and oracle sweeps.

pub mod algorithms;
pub mod concentration;
mod error;
pub mod families_regions;
pub mod special;
pub mod tof_core;
pub mod verify;

pub use error::{Error, Result};
