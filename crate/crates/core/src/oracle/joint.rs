//! Exact joint probabilities: two overlapping copies, and object counts per
//! clique pattern.

use std::collections::BTreeMap;

use serde::Serialize;

use super::pi::{exact_pi, MAX_COVER_CLIQUES};
use super::sum::CompensatedSum;
use crate::cover::{combine_covers, CliqueCover, PlacedGraph};
use crate::error::{Error, Result};
use crate::graph::VertexSubset;

/// Both evaluations of the two-copy identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointReport {
    /// Sum of π over the combined covers of the union.
    pub via_combined_covers: f64,
    /// Direct enumeration of `G1` by `C1`, `G2` by `C2`, and no edge between
    /// the two private parts.
    pub direct: f64,
    /// Direct enumeration without the cross-edge condition.
    pub unconstrained: f64,
    /// `unconstrained - direct`: mass of configurations that add cross edges.
    pub cross_edge_mass: f64,
    /// `π(G1, C1) π(G2, C2)`
    pub product: f64,
    pub combined_covers: usize,
}

/// Largest union handled by the direct enumeration.
pub const MAX_JOINT_ORDER: usize = 6;

pub fn exact_joint(g1: &PlacedGraph, c1: &CliqueCover, g2: &PlacedGraph, c2: &CliqueCover, m: u64, p: f64) -> Result<JointReport> {
    let combined = combine_covers(g1, c1, g2, c2)?;
    let u = combined.labels.len();
    if u > MAX_JOINT_ORDER {
        return Err(Error::CapExceeded {
            what: "union order for joint enumeration",
            actual: u as u128,
            cap: MAX_JOINT_ORDER as u128,
        });
    }
    let mut a = CompensatedSum::default();
    for c in &combined.covers {
        if c.len() > MAX_COVER_CLIQUES {
            return Err(Error::CapExceeded {
                what: "cover cliques for exact probability",
                actual: c.len() as u128,
                cap: MAX_COVER_CLIQUES as u128,
            });
        }
        a.add(exact_pi(&combined.union, c, m, p)?);
    }

    let (part1, part2) = (combined.part1, combined.part2);
    let local = |s: VertexSubset, part: VertexSubset| -> u32 {
        // Position-compressed trace of s on part.
        part.iter().enumerate().filter(|&(_, v)| s.contains(v)).map(|(i, _)| 1u32 << i).sum()
    };
    let allowed = |cover: &CliqueCover, part: VertexSubset| -> u64 {
        cover.cliques().iter().map(|&c| 1u64 << local(c, part)).sum()
    };
    let want1 = allowed(&combined.cover1, part1);
    let want2 = allowed(&combined.cover2, part2);
    let private1 = VertexSubset(part1.0 & !part2.0);
    let private2 = VertexSubset(part2.0 & !part1.0);

    // Per-object moves: (trace bit on V1 or 0, trace bit on V2 or 0, cross) -> weight.
    let mut moves: BTreeMap<(u64, u64, bool), f64> = BTreeMap::new();
    for bits in 0u32..(1u32 << u) {
        let s = VertexSubset(bits);
        let (t1, t2) = (s.intersect(part1), s.intersect(part2));
        let b1 = if t1.len() >= 2 { 1u64 << local(t1, part1) } else { 0 };
        let b2 = if t2.len() >= 2 { 1u64 << local(t2, part2) } else { 0 };
        if b1 & !want1 != 0 || b2 & !want2 != 0 {
            continue;
        }
        let cross = !s.intersect(private1).is_empty() && !s.intersect(private2).is_empty();
        let k = s.len() as i32;
        let w = p.powi(k) * (1.0 - p).powi(u as i32 - k);
        if w > 0.0 {
            *moves.entry((b1, b2, cross)).or_default() += w;
        }
    }
    let mut state: BTreeMap<(u64, u64, bool), f64> = [((0, 0, false), 1.0)].into();
    for _ in 0..m {
        let mut next: BTreeMap<(u64, u64, bool), f64> = BTreeMap::new();
        for (&(s1, s2, x), &pa) in &state {
            for (&(b1, b2, y), &pb) in &moves {
                *next.entry((s1 | b1, s2 | b2, x || y)).or_default() += pa * pb;
            }
        }
        state = next;
    }
    let direct = state.get(&(want1, want2, false)).copied().unwrap_or(0.0);
    let unconstrained = direct + state.get(&(want1, want2, true)).copied().unwrap_or(0.0);
    let product = exact_pi(&g1.graph, c1, m, p)? * exact_pi(&g2.graph, c2, m, p)?;
    let report = JointReport {
        via_combined_covers: a.value(),
        direct,
        unconstrained,
        cross_edge_mass: unconstrained - direct,
        product,
        combined_covers: combined.covers.len(),
    };
    if (report.via_combined_covers - report.direct).abs() > 1e-10 {
        return Err(Error::Consistency(format!(
            "joint identity fails: {} via combined covers, {} direct",
            report.via_combined_covers, report.direct
        )));
    }
    Ok(report)
}

/// Exact multinomial probability of the object counts per clique pattern,
/// with the product-Poisson reference.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternJoint {
    pub exact: f64,
    pub poisson: f64,
    pub ratio: f64,
}

fn ln_factorial(k: u64) -> f64 {
    statrs::function::gamma::ln_gamma(k as f64 + 1.0)
}

/// `P(Nᵢ = aᵢ for all i)` where `Nᵢ` counts objects whose trace on the `h`
/// copy vertices is exactly `Cᵢ`, against `Π Poisson(m p^{|Cᵢ|})(aᵢ)`.
pub fn exact_pattern_joint(h: usize, cover: &CliqueCover, m: u64, p: f64, counts: &[u64]) -> Result<PatternJoint> {
    if counts.len() != cover.len() {
        return Err(Error::InvalidParameter(format!("{} counts for {} cliques", counts.len(), cover.len())));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("p must lie in (0, 1), got {p}")));
    }
    let used: u64 = counts.iter().sum();
    if used > m {
        return Err(Error::InvalidParameter(format!("counts sum to {used} > m = {m}")));
    }
    let mf = m as f64;
    let sizes: Vec<usize> = cover.cliques().iter().map(|c| c.len()).collect();
    let ln_pi: Vec<f64> = sizes
        .iter()
        .map(|&k| k as f64 * p.ln() + (h - k) as f64 * (-p).ln_1p())
        .collect();
    let rest: f64 = ln_pi.iter().map(|l| l.exp()).sum();
    let mut ln_exact = (m - used) as f64 * (-rest).ln_1p();
    ln_exact += (0..used).map(|j| (mf - j as f64).ln()).sum::<f64>();
    let mut ln_poisson = 0.0;
    for ((&a, &lp), &k) in counts.iter().zip(&ln_pi).zip(&sizes) {
        ln_exact += a as f64 * lp - ln_factorial(a);
        let lambda_ln = mf.ln() + k as f64 * p.ln();
        ln_poisson += -lambda_ln.exp() + a as f64 * lambda_ln - ln_factorial(a);
    }
    Ok(PatternJoint {
        exact: ln_exact.exp(),
        poisson: ln_poisson.exp(),
        ratio: (ln_exact - ln_poisson).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PatternGraph;

    fn placed(g: PatternGraph, labels: &[u32]) -> PlacedGraph {
        PlacedGraph::new(g, labels.to_vec()).unwrap()
    }

    #[test]
    fn identical_copies_reduce_to_pi() {
        let k3 = PatternGraph::complete(3).unwrap();
        let edges = CliqueCover::from_ids(&[&[1, 2], &[1, 3], &[2, 3]]);
        let g = placed(k3.clone(), &[1, 2, 3]);
        let r = exact_joint(&g, &edges, &g, &edges, 4, 0.3).unwrap();
        let pi = exact_pi(&k3, &edges, 4, 0.3).unwrap();
        assert!((r.direct - pi).abs() < 1e-14);
        assert!((r.via_combined_covers - pi).abs() < 1e-14);
    }

    #[test]
    fn two_edges_sharing_a_vertex() {
        let k2 = PatternGraph::complete(2).unwrap();
        let e = CliqueCover::from_ids(&[&[1, 2]]);
        let r = exact_joint(&placed(k2.clone(), &[1, 2]), &e, &placed(k2, &[2, 3]), &e, 3, 0.2).unwrap();
        assert!((r.via_combined_covers - r.direct).abs() < 1e-10);
        assert!(r.cross_edge_mass > 0.0);
    }

    #[test]
    fn pattern_joint_trivial_cases() {
        let edges = CliqueCover::from_ids(&[&[1, 2], &[1, 3], &[2, 3]]);
        let (m, p) = (50u64, 0.1f64);
        let pi = p * p * (1.0 - p);
        let r = exact_pattern_joint(3, &edges, m, p, &[0, 0, 0]).unwrap();
        assert!((r.exact - (1.0 - 3.0 * pi).powi(50)).abs() < 1e-14);
        let tri = CliqueCover::from_ids(&[&[1, 2, 3]]);
        let r = exact_pattern_joint(3, &tri, m, p, &[1]).unwrap();
        let p1 = p.powi(3);
        assert!((r.exact / (m as f64 * p1 * (1.0 - p1).powi(49)) - 1.0).abs() < 1e-12);
    }
}
