//! Exact Neyman–Pearson envelopes for pairs of finite probability vectors.

use std::cmp::Ordering;

use super::curve::NumericCurve;
use crate::special::{binomial_ln_pmf, poisson_ln_pmf};
use crate::{Error, Result};

/// Mass allowed to fall outside a truncated discrete support.
pub const TRUNCATION_MASS: f64 = 1e-12;

const NORMALIZATION_TOL: f64 = 1e-12;

/// Exact trade-off curve of `p` against `q` on a shared finite support.
///
/// Support points are ordered by likelihood ratio q/p (descending) and the
/// cumulative (type-I error, power) pairs become the knots of the lower
/// envelope. Points with equal ratio are collinear, which realizes the
/// randomized tests between them.
pub fn exact_discrete_tof(p: &[f64], q: &[f64]) -> Result<NumericCurve> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(
            "pmf vectors differ in length".into(),
        ));
    }
    if p.is_empty() {
        return Err(Error::invalid("empty support"));
    }
    for v in [p, q] {
        if v.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::invalid(
                "pmf entries must be finite and non-negative",
            ));
        }
        let total: f64 = v.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::invalid(format!("pmf sums to {total}, not 1")));
        }
    }

    let mut order: Vec<usize> = (0..p.len()).filter(|&i| p[i] > 0.0 || q[i] > 0.0).collect();
    order.sort_by(|&i, &j| ratio_cmp_desc(p[i], q[i], p[j], q[j]));

    let mut grid = vec![0.0];
    let mut values = vec![1.0];
    let (mut x, mut power) = (0.0_f64, 0.0_f64);
    for &i in &order {
        x += p[i];
        power += q[i];
        let xi = x.min(1.0);
        let fi = (1.0 - power).clamp(0.0, 1.0 - xi);
        let last = grid.len() - 1;
        if xi > grid[last] {
            grid.push(xi);
            values.push(fi.min(values[last]));
        } else {
            values[last] = values[last].min(fi);
        }
    }
    let last = grid.len() - 1;
    if grid[last] < 1.0 {
        if grid[last] > 0.0 && 1.0 - grid[last] <= NORMALIZATION_TOL {
            grid[last] = 1.0;
            values[last] = 0.0;
        } else {
            grid.push(1.0);
            values.push(0.0);
        }
    } else {
        values[last] = 0.0;
    }
    Ok(NumericCurve::from_parts(grid, values))
}

// Orders (p, q) atoms by q/p descending without dividing; p = 0 sorts first.
fn ratio_cmp_desc(pi: f64, qi: f64, pj: f64, qj: f64) -> Ordering {
    (qj * pi).partial_cmp(&(qi * pj)).unwrap_or(Ordering::Equal)
}

/// Poisson(a) and Poisson(b) pmfs on {0, …, K}, with K the first point where
/// both CDFs exceed 1 − [`TRUNCATION_MASS`]; each tail is lumped into K.
pub fn poisson_pmfs(a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (mut p, mut q) = (Vec::new(), Vec::new());
    let (mut cp, mut cq) = (0.0, 0.0);
    let mut k = 0u64;
    loop {
        let (pk, qk) = (
            poisson_ln_pmf(k as f64, a).exp(),
            poisson_ln_pmf(k as f64, b).exp(),
        );
        p.push(pk);
        q.push(qk);
        cp += pk;
        cq += qk;
        let past_modes = k as f64 >= a.max(b);
        if past_modes && cp >= 1.0 - TRUNCATION_MASS && cq >= 1.0 - TRUNCATION_MASS {
            break;
        }
        k += 1;
    }
    lump_tail(&mut p);
    lump_tail(&mut q);
    (p, q)
}

fn lump_tail(v: &mut [f64]) {
    let n = v.len();
    let head: f64 = v[..n - 1].iter().sum();
    v[n - 1] = (1.0 - head).max(0.0);
}

/// Binomial(n, a) and Binomial(n, b) pmfs on {0, …, n}.
pub fn binomial_pmfs(n: u64, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let pmf = |prob: f64| {
        let mut v: Vec<f64> = (0..=n).map(|k| binomial_ln_pmf(k, n, prob).exp()).collect();
        let total: f64 = v.iter().sum();
        v.iter_mut().for_each(|x| *x /= total);
        v
    };
    (pmf(a), pmf(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_distributions_give_identity() {
        let p = [0.2, 0.3, 0.5];
        let c = exact_discrete_tof(&p, &p).unwrap();
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            assert!((c.value(x) - (1.0 - x)).abs() < 1e-15);
        }
    }

    #[test]
    fn disjoint_supports_give_zero_curve() {
        let c = exact_discrete_tof(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert_eq!(c.value(0.0), 0.0);
        assert_eq!(c.value(0.5), 0.0);
    }

    #[test]
    fn ties_form_one_segment() {
        // Atoms 0 and 1 share ratio 2; the envelope is linear across them.
        let c = exact_discrete_tof(&[0.1, 0.2, 0.7], &[0.2, 0.4, 0.4]).unwrap();
        assert!((c.value(0.15) - 0.7).abs() < 1e-15);
        assert!((c.value(0.3) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn rejects_unnormalized_input() {
        assert!(exact_discrete_tof(&[0.5, 0.4], &[0.5, 0.5]).is_err());
        assert!(exact_discrete_tof(&[], &[]).is_err());
    }

    #[test]
    fn poisson_truncation_keeps_mass() {
        let (p, q) = poisson_pmfs(1.0, 6.0);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        let tail_q = q[q.len() - 1];
        assert!(tail_q < 1e-11);
    }
}
