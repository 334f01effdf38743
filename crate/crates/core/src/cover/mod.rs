//! Clique covers of a pattern graph.
//!
//! A clique cover is a set of vertex subsets, each inducing a clique, that
//! together contain every edge. It is proper when every member has at least two
//! vertices. Every distinct proper cover (redundant ones included) is a
//! separate way for an object configuration to induce a copy, so enumeration
//! never drops supersets.

pub mod combine;
pub mod restrict;

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{PatternGraph, VertexSubset, DEFAULT_PATTERN_CAP};

pub use combine::{combine_covers, CombinedCovers, PlacedGraph};
pub use restrict::{restrict_cover, RestrictedCover, RestrictionKind};

/// Lexicographic order on the sorted 1-indexed id lists.
pub fn lex_cmp(a: VertexSubset, b: VertexSubset) -> Ordering {
    a.iter().cmp(b.iter())
}

/// Limits on cover enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverLimits {
    pub pattern_cap: usize,
    /// Full enumeration walks all `2^q` subsets of the `q` cliques.
    pub max_cliques: usize,
}

impl Default for CoverLimits {
    fn default() -> Self {
        CoverLimits {
            pattern_cap: DEFAULT_PATTERN_CAP,
            max_cliques: 20,
        }
    }
}

/// A duplicate-free family of vertex subsets, kept in canonical order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CliqueCover {
    cliques: Vec<VertexSubset>,
}

/// Why a family fails to be a proper clique cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverViolation {
    OutOfRange(VertexSubset),
    NotClique(VertexSubset),
    Singleton(VertexSubset),
    Empty(VertexSubset),
    UncoveredEdge(usize, usize),
}

impl CliqueCover {
    /// Sorts into canonical order and drops duplicates.
    pub fn new(cliques: impl IntoIterator<Item = VertexSubset>) -> Self {
        let mut cliques: Vec<_> = cliques.into_iter().collect();
        cliques.sort_by(|a, b| lex_cmp(*a, *b));
        cliques.dedup();
        CliqueCover { cliques }
    }

    /// From 1-indexed id lists, the serialization convention.
    pub fn from_ids(ids: &[&[usize]]) -> Self {
        Self::new(
            ids.iter()
                .map(|c| VertexSubset::from_vertices(c.iter().map(|&v| v - 1))),
        )
    }

    pub fn cliques(&self) -> &[VertexSubset] {
        &self.cliques
    }

    /// `|C|`.
    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    /// `ΣC = Σ |C_i|`.
    pub fn total_size(&self) -> usize {
        self.cliques.iter().map(|c| c.len()).sum()
    }

    pub fn is_proper(&self) -> bool {
        self.cliques.iter().all(|c| c.len() >= 2)
    }

    pub fn to_ids(&self) -> Vec<Vec<usize>> {
        self.cliques.iter().map(|c| c.to_ids()).collect()
    }

    /// Image under a vertex map `v -> perm[v]`.
    pub fn mapped(&self, perm: &[usize]) -> CliqueCover {
        CliqueCover::new(
            self.cliques
                .iter()
                .map(|c| VertexSubset::from_vertices(c.iter().map(|v| perm[v]))),
        )
    }

    /// Least image over the given automorphisms (identity included by caller).
    pub fn canonical_orbit(&self, automorphisms: &[Vec<usize>]) -> CliqueCover {
        automorphisms
            .iter()
            .map(|sigma| self.mapped(sigma))
            .min()
            .unwrap_or_else(|| self.clone())
    }

    /// Checks clique membership, edge coverage and properness.
    pub fn check(&self, h0: &PatternGraph) -> std::result::Result<(), CoverViolation> {
        let all = h0.vertices();
        for &c in &self.cliques {
            if c.is_empty() {
                return Err(CoverViolation::Empty(c));
            }
            if !c.is_subset_of(all) {
                return Err(CoverViolation::OutOfRange(c));
            }
            if c.len() < 2 {
                return Err(CoverViolation::Singleton(c));
            }
            for u in c.iter() {
                for v in c.iter().filter(|&v| v > u) {
                    if !h0.has_edge(u, v) {
                        return Err(CoverViolation::NotClique(c));
                    }
                }
            }
        }
        for (u, v) in h0.edges() {
            if !self.cliques.iter().any(|c| c.contains(u) && c.contains(v)) {
                return Err(CoverViolation::UncoveredEdge(u, v));
            }
        }
        Ok(())
    }

    pub fn is_proper_cover_of(&self, h0: &PatternGraph) -> bool {
        self.check(h0).is_ok()
    }
}

impl Ord for CliqueCover {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cliques
            .iter()
            .map(|c| c.to_ids())
            .cmp(other.cliques.iter().map(|c| c.to_ids()))
    }
}

impl PartialOrd for CliqueCover {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for CliqueCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.cliques.iter()).finish()
    }
}

impl Serialize for CliqueCover {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_ids().serialize(s)
    }
}

/// All vertex subsets of size at least 2 that induce cliques, in canonical order.
pub fn enumerate_cliques(h0: &PatternGraph) -> Vec<VertexSubset> {
    let mut out: Vec<_> = VertexSubset::nonempty_subsets(h0.vertex_count())
        .filter(|s| s.len() >= 2 && h0.is_clique(*s))
        .collect();
    out.sort_by(|a, b| lex_cmp(*a, *b));
    out
}

/// Packed edge mask of the clique on `c`.
pub(crate) fn clique_edge_mask(c: VertexSubset) -> u128 {
    let mut mask = 0u128;
    for v in c.iter() {
        for u in c.iter().take_while(|&u| u < v) {
            mask |= 1 << crate::graph::pair_index(u, v);
        }
    }
    mask
}

/// Every proper clique cover of `h0`, redundant covers included, sorted.
pub fn enumerate_proper_covers(h0: &PatternGraph) -> Result<Vec<CliqueCover>> {
    enumerate_proper_covers_with(h0, &CoverLimits::default())
}

pub fn enumerate_proper_covers_with(h0: &PatternGraph, limits: &CoverLimits) -> Result<Vec<CliqueCover>> {
    h0.check_cap(limits.pattern_cap)?;
    let cliques = enumerate_cliques(h0);
    if cliques.len() > limits.max_cliques {
        return Err(Error::CapExceeded {
            what: "clique count for full cover enumeration",
            actual: cliques.len() as u128,
            cap: limits.max_cliques as u128,
        });
    }
    let target = h0.edge_mask();
    let masks: Vec<u128> = cliques.iter().map(|&c| clique_edge_mask(c)).collect();
    let mut covers = Vec::new();
    for pick in 1u64..(1u64 << cliques.len()) {
        let mut covered = 0u128;
        let mut bits = pick;
        while bits != 0 {
            covered |= masks[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        if covered == target {
            let mut bits = pick;
            let chosen = std::iter::from_fn(|| {
                (bits != 0).then(|| {
                    let i = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    cliques[i]
                })
            });
            covers.push(CliqueCover::new(chosen));
        }
    }
    covers.sort();
    Ok(covers)
}
