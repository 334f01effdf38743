//! Monte Carlo convergence experiment at `p = c n^{-η₀}` over a grid of `n`.

use rayon::prelude::*;
use serde::Serialize;

use super::summary::{summarize, BootstrapConfig, DistributionSummary, Interval};
use crate::cover::CliqueCover;
use crate::error::{Error, Result};
use crate::graph::{count_induced_copies, PatternGraph};
use crate::rational::Rational;
use crate::sampler::{project_graph, sample_incidence_with, SamplingMethod, SeedSpec};
use crate::threshold::{classify_balance, ModelParams, RegimeDiagnostics};
use crate::witness::{per_cover_counts_with, CoverCounts};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub alpha: Rational,
    pub c: f64,
    pub grid: Vec<u64>,
    pub replicates: usize,
    pub seed: u64,
    pub bootstrap_resamples: usize,
    pub level: f64,
    /// Run even when `α >= 2η₀`.
    pub force: bool,
    pub method: SamplingMethod,
}

impl ExperimentConfig {
    pub fn new(alpha: Rational, c: f64, grid: Vec<u64>, replicates: usize, seed: u64) -> Self {
        ExperimentConfig {
            alpha,
            c,
            grid,
            replicates,
            seed,
            bootstrap_resamples: 1000,
            level: 0.95,
            force: false,
            method: SamplingMethod::Auto,
        }
    }
}

/// Counts for one replicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReplicateCounts {
    pub replicate: u64,
    pub x: u64,
    pub y0: u64,
    pub y1: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridPoint {
    pub n: u64,
    pub m: u64,
    pub p: f64,
    pub seed: u64,
    pub summary: DistributionSummary,
    pub y0_mean: f64,
    pub y1_mean: f64,
    /// `mean(Y1) / mean(X)`, absent when no copy was seen.
    pub y1_share: Option<f64>,
    pub y1_positive_fraction: f64,
    pub orbits: CoverCounts,
    pub replicates: Vec<ReplicateCounts>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub eta0: Rational,
    pub lambda0: f64,
    pub critical: Vec<CliqueCover>,
    pub strictly_alpha_balanced: bool,
    pub regime: RegimeDiagnostics,
    pub points: Vec<GridPoint>,
    pub warnings: Vec<String>,
}

/// SplitMix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent master seed for grid point `n`.
pub fn grid_seed(master: u64, n: u64) -> u64 {
    mix(master ^ mix(n))
}

pub fn run_experiment(h0: &PatternGraph, cfg: &ExperimentConfig) -> Result<Experiment> {
    if cfg.replicates == 0 {
        return Err(Error::InvalidParameter("need at least one replicate".into()));
    }
    if cfg.grid.is_empty() {
        return Err(Error::InvalidParameter("empty n grid".into()));
    }
    let report = classify_balance(h0, &cfg.alpha)?;
    if !report.regime.mp2_vanishes && !cfg.force {
        return Err(Error::Regime(format!(
            "alpha - 2 eta0 = {} is not negative; pass force to run anyway",
            report.regime.mp2_exponent
        )));
    }
    let lambda0 = report.lambda0(cfg.c);
    let mut points = Vec::with_capacity(cfg.grid.len());
    for &n in &cfg.grid {
        let params = ModelParams::at_threshold(n, &cfg.alpha, cfg.c, &report.eta0)?;
        let seed = grid_seed(cfg.seed, n);
        let results: Vec<(ReplicateCounts, CoverCounts)> = (0..cfg.replicates as u64)
            .into_par_iter()
            .map(|r| {
                let sample = sample_incidence_with(n as usize, params.m as usize, params.p, SeedSpec::new(seed, r), cfg.method)?;
                let counts = per_cover_counts_with(&sample, h0, &report.critical)?;
                let direct = count_induced_copies(&project_graph(&sample), h0)?;
                if direct != counts.x as u128 {
                    return Err(Error::Consistency(format!(
                        "replicate {r} at n = {n}: {direct} induced copies but {} witnessed",
                        counts.x
                    )));
                }
                Ok((
                    ReplicateCounts {
                        replicate: r,
                        x: counts.x,
                        y0: counts.y0,
                        y1: counts.y1,
                    },
                    counts,
                ))
            })
            .collect::<Result<_>>()?;
        let mut orbits = CoverCounts::default();
        results.iter().for_each(|(_, c)| orbits.merge(c));
        let replicates: Vec<ReplicateCounts> = results.into_iter().map(|(r, _)| r).collect();
        let xs: Vec<u64> = replicates.iter().map(|r| r.x).collect();
        let boot = BootstrapConfig {
            resamples: cfg.bootstrap_resamples,
            level: cfg.level,
            seed: mix(seed),
        };
        let summary = summarize(&xs, lambda0, &boot)?;
        let rf = cfg.replicates as f64;
        let y0_mean = replicates.iter().map(|r| r.y0 as f64).sum::<f64>() / rf;
        let y1_mean = replicates.iter().map(|r| r.y1 as f64).sum::<f64>() / rf;
        points.push(GridPoint {
            n,
            m: params.m,
            p: params.p,
            seed,
            y1_share: (summary.mean > 0.0).then(|| y1_mean / summary.mean),
            y1_positive_fraction: replicates.iter().filter(|r| r.y1 > 0).count() as f64 / rf,
            summary,
            y0_mean,
            y1_mean,
            orbits,
            replicates,
        });
    }
    Ok(Experiment {
        config: cfg.clone(),
        eta0: report.eta0.clone(),
        lambda0,
        critical: report.critical.clone(),
        strictly_alpha_balanced: report.strictly_alpha_balanced,
        regime: report.regime.clone(),
        points,
        warnings: report.warnings.clone(),
    })
}

/// TV is non-increasing along the grid up to sampling error: each TV is at
/// most the upper bootstrap bound of the previous one. `None` when some
/// interval is missing.
pub fn tv_trend_holds(points: &[GridPoint]) -> Option<bool> {
    let cis: Option<Vec<Interval>> = points.iter().map(|p| p.summary.tv_ci).collect();
    let cis = cis?;
    Some(
        points
            .windows(2)
            .zip(&cis)
            .all(|(w, ci)| w[1].summary.tv <= ci.upper),
    )
}

/// `mean(Y1)/mean(X)` never increases along the grid.
pub fn y1_share_non_increasing(points: &[GridPoint]) -> bool {
    let shares: Vec<f64> = points.iter().map(|p| p.y1_share.unwrap_or(0.0)).collect();
    shares.windows(2).all(|w| w[1] <= w[0])
}
