use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "rig-poisson", version, about = "Induced subgraph counts in random intersection graphs G(n, m, p)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads; defaults to the available cores. Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Threshold exponent, critical covers, balance verdicts and λ₀.
    Analyze(AnalyzeArgs),
    /// Monte Carlo convergence experiment at p = c·n^(-η₀).
    Simulate(SimulateArgs),
    /// Exact probabilities against their asymptotic predictions.
    Oracle(OracleArgs),
    /// Draw G(n, m, p) or the matched G(n, p̂).
    Sample(SampleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Auto,
    Bernoulli,
    Skip,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PHat {
    Linear,
    Exact,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Pattern file (edge list or graph6); `-` reads stdin.
    #[arg(long)]
    pub pattern: PathBuf,
    /// α as an exact rational, e.g. `3/2`.
    #[arg(long)]
    pub alpha: String,
    /// Constant c in p = c·n^(-η₀); rational or decimal.
    #[arg(long, default_value = "1")]
    pub c: String,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub pattern: PathBuf,
    #[arg(long)]
    pub alpha: String,
    #[arg(long, default_value = "1")]
    pub c: String,
    /// Comma-separated grid of n.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    #[arg(long, short = 'R', default_value_t = 100)]
    pub replicates: usize,
    /// Master seed; `RIG_POISSON_SEED` is used when absent.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    pub bootstrap: usize,
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    /// Run even when the regime check fails.
    #[arg(long)]
    pub force: bool,
    /// Exit with code 4 unless TV is non-increasing within bootstrap CIs.
    #[arg(long)]
    pub assert_trend: bool,
    /// Leave per-replicate counts out of the JSON output.
    #[arg(long)]
    pub no_replicates: bool,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long)]
    pub pattern: PathBuf,
    #[arg(long)]
    pub alpha: String,
    /// p = c·n^(-η₀); mutually exclusive with --p. Defaults to 1.
    #[arg(long, conflicts_with = "p")]
    pub c: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Replaces m = ⌊n^α⌋.
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    /// `critical`, `all`, `edges`, or explicit cliques like `1,2;2,3`.
    #[arg(long, default_value = "critical")]
    pub cover: String,
    /// Require the exact distribution; refuse when over budget.
    #[arg(long)]
    pub distribution: bool,
    /// Exact distribution budget: at most 2^budget joint assignments.
    #[arg(long, default_value_t = rig_poisson::oracle::DEFAULT_BUDGET_LOG2)]
    pub budget: u32,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: usize,
    /// Gives m = ⌊n^α⌋ unless --m is set.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long, conflicts_with = "c")]
    pub p: Option<f64>,
    /// p = c·n^(-η₀) with η₀ from --pattern and --alpha.
    #[arg(long)]
    pub c: Option<String>,
    /// Pattern for η₀ and for counting induced copies.
    #[arg(long)]
    pub pattern: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short = 'R', default_value_t = 1)]
    pub replicates: usize,
    /// Sample the matched Erdős–Rényi graph G(n, p̂) instead.
    #[arg(long)]
    pub gnp: bool,
    /// Matched edge probability: `linear` is m p², `exact` is 1 - (1 - p²)^m.
    #[arg(long, value_enum, default_value_t = PHat::Linear)]
    pub p_hat: PHat,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
}
