use serde::Serialize;

use super::{lex_cmp, CliqueCover};
use crate::graph::VertexSubset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RestrictionKind {
    /// Keeps every restriction `C_i ∩ S` with at least one vertex.
    AllNonempty,
    /// Keeps restrictions with at least two vertices.
    SizeAtLeastTwo,
}

/// Multiset of restrictions `C_i ∩ S`; equal restrictions of distinct cover
/// cliques are kept with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictedCover {
    pub kind: RestrictionKind,
    pub elements: Vec<VertexSubset>,
}

impl RestrictedCover {
    /// Multiset cardinality `|C[S]|`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `ΣC[S]`.
    pub fn total_size(&self) -> usize {
        self.elements.iter().map(|c| c.len()).sum()
    }
}

/// Returns `(C[S], C'[S])`.
pub fn restrict_cover(cover: &CliqueCover, s: VertexSubset) -> (RestrictedCover, RestrictedCover) {
    let mut all: Vec<VertexSubset> = cover
        .cliques()
        .iter()
        .map(|&c| c.intersect(s))
        .filter(|r| !r.is_empty())
        .collect();
    all.sort_by(|a, b| lex_cmp(*a, *b));
    let big = all.iter().copied().filter(|r| r.len() >= 2).collect();
    (
        RestrictedCover {
            kind: RestrictionKind::AllNonempty,
            elements: all,
        },
        RestrictedCover {
            kind: RestrictionKind::SizeAtLeastTwo,
            elements: big,
        },
    )
}

/// Cardinalities and total sizes of `C[S]` and `C'[S]` without materialising them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RestrictionStats {
    /// `|C[S]|`
    pub count: usize,
    /// `ΣC[S]`
    pub total: usize,
    /// `|C'[S]|`
    pub count_big: usize,
    /// `ΣC'[S]`
    pub total_big: usize,
}

impl RestrictionStats {
    pub fn of(cliques: &[VertexSubset], s: VertexSubset) -> Self {
        let mut st = RestrictionStats::default();
        for c in cliques {
            let j = c.intersect(s).len();
            if j >= 1 {
                st.count += 1;
                st.total += j;
            }
            if j >= 2 {
                st.count_big += 1;
                st.total_big += j;
            }
        }
        st
    }
}
