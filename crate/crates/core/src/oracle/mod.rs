//! Exact, non-asymptotic probabilities used as ground truth.

pub mod distribution;
pub mod joint;
pub mod pi;
pub mod sum;

pub use distribution::{exact_distribution, exact_distribution_with, exact_mean, DEFAULT_BUDGET_LOG2};
pub use joint::{exact_joint, exact_pattern_joint, JointReport, PatternJoint, MAX_JOINT_ORDER};
pub use pi::{
    exact_copy_probability, exact_pi, exact_pi_detail, exact_pi_inclusion_exclusion, ExactPi, PatternWeights, PiMethod,
    MAX_COVER_CLIQUES, SERIES_LIMIT,
};
pub use sum::{log_sum_exp, CompensatedSum};
