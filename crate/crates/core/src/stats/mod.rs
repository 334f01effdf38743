//! Poisson references, total variation and the convergence experiment.

pub mod experiment;
pub mod poisson;
pub mod summary;

pub use experiment::{
    grid_seed, run_experiment, tv_trend_holds, y1_share_non_increasing, Experiment, ExperimentConfig, GridPoint,
    ReplicateCounts,
};
pub use poisson::{poisson_pmf, poisson_quantile, poisson_tail, tv_distance, tv_to_poisson, PoissonTv, TAIL_TOLERANCE};
pub use summary::{summarize, BootstrapConfig, DistributionSummary, Interval, MIN_REPLICATES_FOR_CI};
