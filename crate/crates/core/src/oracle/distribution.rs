//! Exact count distribution and mean of induced copies.

use std::collections::BTreeMap;

use super::pi::exact_pi;
use super::sum::CompensatedSum;
use crate::cover::{clique_edge_mask, enumerate_proper_covers};
use crate::error::{Error, Result};
use crate::graph::{count_induced_copies, count_pattern_copies_f64, pair_index, HostGraph, PatternGraph, VertexSubset};

/// Default cap on `log2` of the raw assignment count `(2^n)^m`.
pub const DEFAULT_BUDGET_LOG2: u32 = 24;

/// `E(X) = N_n Σ_C π(H₀, C)` over every proper cover.
pub fn exact_mean(h0: &PatternGraph, n: u64, m: u64, p: f64) -> Result<f64> {
    if (n as usize) < h0.vertex_count() {
        return Ok(0.0);
    }
    let covers = enumerate_proper_covers(h0)?;
    let mut s = CompensatedSum::default();
    for c in &covers {
        s.add(exact_pi(h0, c, m, p)?);
    }
    Ok(count_pattern_copies_f64(n, h0) * s.value())
}

fn host_from_mask(n: usize, mask: u128) -> HostGraph {
    let mut edges = Vec::new();
    for v in 1..n {
        for u in 0..v {
            if mask >> pair_index(u, v) & 1 == 1 {
                edges.push((u as u32, v as u32));
            }
        }
    }
    HostGraph::from_edges(n, edges).expect("mask edges are in range")
}

/// Exact pmf of the induced-copy count `X` in `G(n, m, p)`, indexed by `X`.
pub fn exact_distribution(h0: &PatternGraph, n: usize, m: u64, p: f64) -> Result<Vec<f64>> {
    exact_distribution_with(h0, n, m, p, DEFAULT_BUDGET_LOG2)
}

/// As [`exact_distribution`] with an explicit budget: refuses unless
/// `n·m <= budget_log2`, i.e. `(2^n)^m <= 2^budget_log2` joint assignments.
/// The objects are folded in one at a time over the generated edge mask, so
/// the actual work is far below the budget.
pub fn exact_distribution_with(h0: &PatternGraph, n: usize, m: u64, p: f64, budget_log2: u32) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p must lie in [0, 1], got {p}")));
    }
    let bits = (n as u128) * (m as u128);
    if bits > budget_log2 as u128 || n > 16 {
        return Err(Error::BudgetExceeded {
            detail: format!(
                "(2^n)^m = 2^({n}*{m}) = 2^{bits} assignments exceeds the budget 2^{budget_log2}"
            ),
        });
    }
    let mut moves: BTreeMap<u128, f64> = BTreeMap::new();
    for bits in 0u32..(1u32 << n) {
        let s = VertexSubset(bits);
        let k = s.len() as i32;
        let w = p.powi(k) * (1.0 - p).powi(n as i32 - k);
        if w > 0.0 {
            *moves.entry(clique_edge_mask(s)).or_default() += w;
        }
    }
    let mut state: BTreeMap<u128, f64> = [(0u128, 1.0)].into();
    for _ in 0..m {
        let mut next: BTreeMap<u128, f64> = BTreeMap::new();
        for (&a, &pa) in &state {
            for (&b, &pb) in &moves {
                *next.entry(a | b).or_default() += pa * pb;
            }
        }
        state = next;
    }
    let mut pmf: Vec<CompensatedSum> = Vec::new();
    for (&mask, &prob) in &state {
        let x = count_induced_copies(&host_from_mask(n, mask), h0)? as usize;
        if pmf.len() <= x {
            pmf.resize(x + 1, CompensatedSum::default());
        }
        pmf[x].add(prob);
    }
    Ok(pmf.iter().map(|s| s.value()).collect())
}
