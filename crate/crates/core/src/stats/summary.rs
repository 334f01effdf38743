//! Empirical distributions of replicate counts with bootstrap intervals.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::poisson::tv_to_poisson;
use crate::error::{Error, Result};
use crate::sampler::SeedSpec;

/// Bootstrap intervals are only reported from this many replicates on.
pub const MIN_REPLICATES_FOR_CI: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub level: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BootstrapConfig {
    pub resamples: usize,
    pub level: f64,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            resamples: 1000,
            level: 0.95,
            seed: 0,
        }
    }
}

/// Empirical distribution of a count against a Poisson reference.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistributionSummary {
    pub replicates: usize,
    /// `histogram[k]` replicates had count `k`.
    pub histogram: Vec<u64>,
    pub pmf: Vec<f64>,
    pub lambda: f64,
    pub mean: f64,
    pub variance: f64,
    pub tv: f64,
    pub tv_truncation_error: f64,
    /// Scale `sqrt(k*/R)` of the upward bias of empirical TV, `k*` the
    /// number of support points; reported, not subtracted.
    pub tv_bias_scale: f64,
    pub tv_ci: Option<Interval>,
    pub mean_ci: Option<Interval>,
}

fn histogram(values: &[u64]) -> Vec<u64> {
    let max = values.iter().copied().max().unwrap_or(0) as usize;
    let mut h = vec![0u64; max + 1];
    for &v in values {
        h[v as usize] += 1;
    }
    h
}

fn tv_and_mean(h: &[u64], r: usize, lambda: f64) -> Result<(f64, f64)> {
    let pmf: Vec<f64> = h.iter().map(|&c| c as f64 / r as f64).collect();
    let tv = tv_to_poisson(&pmf, lambda)?.tv;
    let mean = h.iter().enumerate().map(|(k, &c)| k as f64 * c as f64).sum::<f64>() / r as f64;
    Ok((tv, mean))
}

/// Percentile interval of a sample of statistics.
fn percentile(mut xs: Vec<f64>, level: f64) -> Interval {
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len();
    let pick = |q: f64| {
        let pos = q * (n - 1) as f64;
        let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
        xs[lo] + (xs[hi] - xs[lo]) * (pos - lo as f64)
    };
    let a = (1.0 - level) / 2.0;
    Interval {
        level,
        lower: pick(a),
        upper: pick(1.0 - a),
    }
}

pub fn summarize(values: &[u64], lambda: f64, boot: &BootstrapConfig) -> Result<DistributionSummary> {
    let r = values.len();
    if r == 0 {
        return Err(Error::InvalidParameter("no replicates".into()));
    }
    if !(boot.level > 0.0 && boot.level < 1.0) {
        return Err(Error::InvalidParameter(format!("confidence level must lie in (0, 1), got {}", boot.level)));
    }
    let h = histogram(values);
    let pmf: Vec<f64> = h.iter().map(|&c| c as f64 / r as f64).collect();
    let ptv = tv_to_poisson(&pmf, lambda)?;
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / r as f64;
    let variance = if r > 1 {
        values.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / (r - 1) as f64
    } else {
        0.0
    };
    let (tv_ci, mean_ci) = if r >= MIN_REPLICATES_FOR_CI && boot.resamples > 0 {
        let stats: Vec<(f64, f64)> = (0..boot.resamples)
            .into_par_iter()
            .map(|b| {
                let mut rng = SeedSpec::new(boot.seed, b as u64).rng();
                let mut hb = vec![0u64; h.len()];
                for _ in 0..r {
                    hb[values[rng.random_range(0..r)] as usize] += 1;
                }
                tv_and_mean(&hb, r, lambda)
            })
            .collect::<Result<_>>()?;
        let (tvs, means): (Vec<f64>, Vec<f64>) = stats.into_iter().unzip();
        (Some(percentile(tvs, boot.level)), Some(percentile(means, boot.level)))
    } else {
        (None, None)
    };
    let support = h.iter().filter(|&&c| c > 0).count();
    Ok(DistributionSummary {
        replicates: r,
        histogram: h,
        pmf,
        lambda,
        mean,
        variance,
        tv: ptv.tv,
        tv_truncation_error: ptv.truncation_error,
        tv_bias_scale: (support as f64 / r as f64).sqrt(),
        tv_ci,
        mean_ci,
    })
}
