//! Resolved run configuration, embedded in every JSON output.

use std::collections::BTreeMap;
use std::path::Path;

use rig_poisson::cover::CliqueCover;
use rig_poisson::graph::io::{parse_pattern, write_graph6};
use rig_poisson::graph::{PatternGraph, VertexSubset};
use rig_poisson::Rational;
use serde::Serialize;
use serde_json::Value;

use crate::args::{Cli, Format};
use crate::commands::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const SEED_ENV: &str = "RIG_POISSON_SEED";
pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct PatternRecord {
    pub path: String,
    pub order: usize,
    pub graph6: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub pattern: Option<PatternRecord>,
    pub alpha: Option<String>,
    pub c: Option<String>,
    pub n: Vec<u64>,
    pub m_override: Option<u64>,
    pub p_override: Option<f64>,
    pub replicates: Option<usize>,
    pub seed: Option<u64>,
    pub seed_source: Option<&'static str>,
    pub format: Format,
    pub output: Option<String>,
    pub threads: Option<usize>,
    pub force: bool,
    pub assert_trend: bool,
    /// Subcommand-specific settings.
    pub settings: BTreeMap<&'static str, Value>,
}

impl RunConfig {
    pub fn new(cli: &Cli, subcommand: &'static str) -> Self {
        RunConfig {
            subcommand,
            pattern: None,
            alpha: None,
            c: None,
            n: Vec::new(),
            m_override: None,
            p_override: None,
            replicates: None,
            seed: None,
            seed_source: None,
            format: cli.format,
            output: cli.output.as_ref().map(|p| p.display().to_string()),
            threads: cli.threads,
            force: false,
            assert_trend: false,
            settings: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, key: &'static str, value: impl Serialize) {
        self.settings
            .insert(key, serde_json::to_value(value).expect("settings serialize"));
    }
}

pub fn load_pattern(path: &Path) -> Result<(PatternGraph, PatternRecord), CliError> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| CliError::input(format!("reading pattern {}: {e}", path.display())))?;
    let g = parse_pattern(&text)?;
    let record = PatternRecord {
        path: path.display().to_string(),
        order: g.vertex_count(),
        graph6: write_graph6(g.vertex_count(), &g.edges()),
    };
    Ok((g, record))
}

/// α must be a strictly positive rational.
pub fn parse_alpha(s: &str) -> Result<Rational, CliError> {
    let a: Rational = s.parse()?;
    if !a.is_positive() {
        return Err(CliError::input(format!("alpha must be positive, got {a}")));
    }
    Ok(a)
}

pub fn parse_c(s: &str) -> Result<Rational, CliError> {
    let c: Rational = s.parse()?;
    if !c.is_positive() {
        return Err(CliError::input(format!("c must be positive, got {c}")));
    }
    Ok(c)
}

/// An explicit `--seed` wins, then the environment, then the default.
pub fn resolve_seed(flag: Option<u64>) -> Result<(u64, &'static str), CliError> {
    if let Some(s) = flag {
        return Ok((s, "flag"));
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(|s| (s, "env"))
            .map_err(|_| CliError::input(format!("{SEED_ENV}={v:?} is not a 64-bit unsigned integer"))),
        Err(_) => Ok((DEFAULT_SEED, "default")),
    }
}

/// Parses `1,2;2,3` (1-indexed vertices, cliques separated by `;`).
pub fn parse_cover(s: &str, h0: &PatternGraph) -> Result<CliqueCover, CliError> {
    let mut cliques = Vec::new();
    for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let mut set = VertexSubset::EMPTY;
        for tok in part.split(',').map(str::trim) {
            let v: usize = tok
                .parse()
                .map_err(|_| CliError::input(format!("cover vertex {tok:?} is not an integer")))?;
            if v == 0 || v > h0.vertex_count() {
                return Err(CliError::input(format!(
                    "cover vertex {v} out of range 1..={}",
                    h0.vertex_count()
                )));
            }
            set = set.union(VertexSubset::singleton(v - 1));
        }
        cliques.push(set);
    }
    let cover = CliqueCover::new(cliques);
    cover
        .check(h0)
        .map_err(|v| CliError::input(format!("not a proper clique cover: {v:?}")))?;
    Ok(cover)
}

/// Every edge as its own clique.
pub fn edge_cover(h0: &PatternGraph) -> CliqueCover {
    CliqueCover::new(
        h0.edges()
            .into_iter()
            .map(|(u, v)| VertexSubset::from_vertices([u, v])),
    )
}
