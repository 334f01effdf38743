//! Covers of a union of two overlapping labelled graphs that restrict to two
//! given covers.
//!
//! For graphs `G1`, `G2` sharing some host vertices (with the shared part
//! induced identically in both) and proper covers `C1`, `C2`, the combined
//! family holds every proper clique cover `C` of `G1 ∪ G2` with
//! `{P ∩ V(G1) : P ∈ C, |P ∩ V(G1)| >= 2} = C1` and likewise for `G2`.
//! Members are `C1,i`, `C2,j` or `C1,i ∪ C2,j`; one member of `C1` may be
//! merged with several members of `C2` (and vice versa). Each object
//! configuration inducing both covers and no edge between `V(G1) \ V(G2)` and
//! `V(G2) \ V(G1)` is induced by exactly one member of the family.

use std::collections::BTreeSet;

use super::{CliqueCover, CoverViolation};
use crate::error::{Error, Result};
use crate::graph::{PatternGraph, VertexSubset, MAX_PATTERN_ORDER};

/// Largest candidate pool whose subsets are scanned.
const MAX_CANDIDATES: usize = 24;

/// A pattern whose vertices carry host labels (`labels[v]` for vertex `v`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacedGraph {
    pub graph: PatternGraph,
    pub labels: Vec<u32>,
}

impl PlacedGraph {
    pub fn new(graph: PatternGraph, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != graph.vertex_count() {
            return Err(Error::Inconsistent(format!(
                "{} labels for {} vertices",
                labels.len(),
                graph.vertex_count()
            )));
        }
        let distinct: BTreeSet<_> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::Inconsistent("repeated host label".into()));
        }
        Ok(PlacedGraph { graph, labels })
    }
}

/// Output of [`combine_covers`], expressed on the union's own vertex indices.
#[derive(Clone, Debug)]
pub struct CombinedCovers {
    /// `G1 ∪ G2`; vertex `i` carries host label `labels[i]` (sorted).
    pub union: PatternGraph,
    pub labels: Vec<u32>,
    pub part1: VertexSubset,
    pub part2: VertexSubset,
    pub cover1: CliqueCover,
    pub cover2: CliqueCover,
    pub covers: Vec<CliqueCover>,
}

/// Restrictions of size at least two, as a set.
pub fn big_restriction_set(cover: &CliqueCover, s: VertexSubset) -> BTreeSet<VertexSubset> {
    cover
        .cliques()
        .iter()
        .map(|c| c.intersect(s))
        .filter(|r| r.len() >= 2)
        .collect()
}

fn embed_cover(cover: &CliqueCover, index: &[usize]) -> CliqueCover {
    cover.mapped(index)
}

pub fn combine_covers(
    g1: &PlacedGraph,
    c1: &CliqueCover,
    g2: &PlacedGraph,
    c2: &CliqueCover,
) -> Result<CombinedCovers> {
    for (g, c, name) in [(g1, c1, "first"), (g2, c2, "second")] {
        c.check(&g.graph).map_err(|v: CoverViolation| {
            Error::InvalidParameter(format!("{name} cover is not a proper cover: {v:?}"))
        })?;
    }
    let labels: Vec<u32> = g1
        .labels
        .iter()
        .chain(&g2.labels)
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if labels.len() > MAX_PATTERN_ORDER {
        return Err(Error::CapExceeded {
            what: "union order",
            actual: labels.len() as u128,
            cap: MAX_PATTERN_ORDER as u128,
        });
    }
    let position = |l: u32| labels.binary_search(&l).expect("label present");
    let index1: Vec<usize> = g1.labels.iter().map(|&l| position(l)).collect();
    let index2: Vec<usize> = g2.labels.iter().map(|&l| position(l)).collect();

    // The shared part must be induced identically in both graphs.
    for (a, &la) in g1.labels.iter().enumerate() {
        for (b, &lb) in g1.labels.iter().enumerate().skip(a + 1) {
            let (Some(x), Some(y)) = (
                g2.labels.iter().position(|&l| l == la),
                g2.labels.iter().position(|&l| l == lb),
            ) else {
                continue;
            };
            if g1.graph.has_edge(a, b) != g2.graph.has_edge(x, y) {
                return Err(Error::Inconsistent(format!(
                    "shared vertices {la} and {lb} disagree on adjacency"
                )));
            }
        }
    }

    let mut rows = vec![0u32; labels.len()];
    for (g, index) in [(&g1.graph, &index1), (&g2.graph, &index2)] {
        for (u, v) in g.edges() {
            rows[index[u]] |= 1 << index[v];
            rows[index[v]] |= 1 << index[u];
        }
    }
    let union = PatternGraph::from_rows(rows);
    let part1 = VertexSubset::from_vertices(index1.iter().copied());
    let part2 = VertexSubset::from_vertices(index2.iter().copied());
    let cover1 = embed_cover(c1, &index1);
    let cover2 = embed_cover(c2, &index2);
    let set1: BTreeSet<_> = cover1.cliques().iter().copied().collect();
    let set2: BTreeSet<_> = cover2.cliques().iter().copied().collect();

    let admissible = |p: VertexSubset| {
        let r1 = p.intersect(part1);
        let r2 = p.intersect(part2);
        union.is_clique(p) && (r1.len() < 2 || set1.contains(&r1)) && (r2.len() < 2 || set2.contains(&r2))
    };
    let mut candidates: BTreeSet<VertexSubset> = BTreeSet::new();
    for &a in cover1.cliques() {
        candidates.insert(a);
        for &b in cover2.cliques() {
            candidates.insert(a.union(b));
        }
    }
    candidates.extend(cover2.cliques().iter().copied());
    let candidates: Vec<VertexSubset> = candidates.into_iter().filter(|&p| admissible(p)).collect();
    if candidates.len() > MAX_CANDIDATES {
        return Err(Error::CapExceeded {
            what: "combined-cover candidate pool",
            actual: candidates.len() as u128,
            cap: MAX_CANDIDATES as u128,
        });
    }

    let mut covers = Vec::new();
    for pick in 1u32..(1u32 << candidates.len()) {
        let chosen = CliqueCover::new(
            (0..candidates.len())
                .filter(|i| pick >> i & 1 == 1)
                .map(|i| candidates[i]),
        );
        if big_restriction_set(&chosen, part1) == set1 && big_restriction_set(&chosen, part2) == set2 {
            chosen.check(&union).map_err(|v| {
                Error::Consistency(format!("combined cover {chosen:?} is invalid: {v:?}"))
            })?;
            covers.push(chosen);
        }
    }
    covers.sort();
    Ok(CombinedCovers {
        union,
        labels,
        part1,
        part2,
        cover1,
        cover2,
        covers,
    })
}
