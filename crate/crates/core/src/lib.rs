//! Induced subgraph counts in random intersection graphs `G(n, m, p)`.
//!
//! The crate computes the threshold exponent `η₀` at which the count of a
//! pattern `H₀` stays bounded, the critical clique covers behind it and the
//! limiting Poisson mean `λ₀`. Seeded samplers, exact oracles and Poisson
//! statistics check those predictions at finite `n`.
//!
//! ```
//! use rig_poisson::graph::PatternGraph;
//! use rig_poisson::threshold::classify_balance;
//! use rig_poisson::Rational;
//!
//! let rep = classify_balance(&PatternGraph::complete(3)?, &Rational::one())?;
//! assert_eq!(rep.eta0, Rational::new(4, 3));
//! # Ok::<(), rig_poisson::Error>(())
//! ```

pub mod cover;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod rational;
pub mod sampler;
pub mod stats;
pub mod threshold;
pub mod witness;

pub use error::{Error, Result};
pub use rational::Rational;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/patterns.md")]
    pub struct Patterns;
    #[doc = include_str!("../../../book/src/clique-covers.md")]
    pub struct CliqueCovers;
    #[doc = include_str!("../../../book/src/thresholds.md")]
    pub struct Thresholds;
    #[doc = include_str!("../../../book/src/simulation.md")]
    pub struct Simulation;
    #[doc = include_str!("../../../book/src/oracles.md")]
    pub struct Oracles;
    #[doc = include_str!("../../../book/src/poisson.md")]
    pub struct Poisson;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
