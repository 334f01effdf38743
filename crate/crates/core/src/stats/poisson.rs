//! Poisson reference pmf and total variation distance.

use serde::Serialize;
use statrs::distribution::{DiscreteCDF, Poisson};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::oracle::CompensatedSum;

/// Poisson mass beyond the truncation point that is tolerated.
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// `e^{-λ} λ^k / k!`, evaluated in log space.
pub fn poisson_pmf(lambda: f64, k: u64) -> f64 {
    if lambda == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (-lambda + k as f64 * lambda.ln() - ln_gamma(k as f64 + 1.0)).exp()
}

/// `P(Poisson(λ) > k)`.
pub fn poisson_tail(lambda: f64, k: u64) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    Poisson::new(lambda).map(|d| d.sf(k)).unwrap_or(0.0)
}

/// Smallest `k` with `P(Poisson(λ) > k) < tol`.
pub fn poisson_quantile(lambda: f64, tol: f64) -> u64 {
    let mut k = (lambda + 10.0 * lambda.sqrt()).floor() as u64;
    while k > 0 && poisson_tail(lambda, k - 1) < tol {
        k -= 1;
    }
    while poisson_tail(lambda, k) >= tol {
        k += 1;
    }
    k
}

/// `½ Σ_k |a_k - b_k|` for finitely supported pmfs (missing entries are 0).
pub fn tv_distance(a: &[f64], b: &[f64]) -> f64 {
    let len = a.len().max(b.len());
    let s: CompensatedSum = (0..len)
        .map(|k| (a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0)).abs())
        .collect();
    0.5 * s.value()
}

/// TV from a finitely supported pmf to `Poisson(λ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PoissonTv {
    pub tv: f64,
    /// Poisson tail mass beyond `support_max`, added as half into `tv`.
    /// Bounds the rounding of that tail, not a statistical error.
    pub truncation_error: f64,
    pub support_max: u64,
}

/// The sum runs to `K = max(len - 1, q)` with `q` the `1 - 10^-12` Poisson
/// quantile; beyond `K` only the Poisson side has mass, contributing half its tail.
pub fn tv_to_poisson(pmf: &[f64], lambda: f64) -> Result<PoissonTv> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda must be finite and nonnegative, got {lambda}")));
    }
    let k_max = (pmf.len().saturating_sub(1) as u64).max(poisson_quantile(lambda, TAIL_TOLERANCE));
    let reference: Vec<f64> = (0..=k_max).map(|k| poisson_pmf(lambda, k)).collect();
    let tail = poisson_tail(lambda, k_max);
    Ok(PoissonTv {
        tv: tv_distance(pmf, &reference) + 0.5 * tail,
        truncation_error: tail,
        support_max: k_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pmf_examples() {
        assert_eq!(poisson_pmf(0.0, 0), 1.0);
        assert!((poisson_pmf(1.0, 1) - (-1f64).exp()).abs() < 1e-15);
        assert!((poisson_pmf(0.125, 2) - (-0.125f64).exp() / 128.0).abs() < 1e-16);
    }

    #[test]
    fn tv_examples() {
        let a = [0.2, 0.5, 0.3];
        assert_eq!(tv_distance(&a, &a), 0.0);
        for lambda in [0.125, 1.0, 3.5] {
            let t = tv_to_poisson(&[1.0], lambda).unwrap();
            assert!((t.tv - (1.0 - (-lambda).exp())).abs() < 1e-12, "{lambda}");
            assert!(t.truncation_error < TAIL_TOLERANCE);
        }
    }

    #[test]
    fn quantile_is_tight() {
        for lambda in [0.01, 0.125, 1.0, 20.0] {
            let q = poisson_quantile(lambda, 1e-12);
            assert!(poisson_tail(lambda, q) < 1e-12);
            assert!(q == 0 || poisson_tail(lambda, q - 1) >= 1e-12);
        }
    }
}
