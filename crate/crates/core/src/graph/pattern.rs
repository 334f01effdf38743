use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest pattern order any routine will accept, whatever the configured cap.
/// Edge sets of patterns this size still fit in a `u128`.
pub const MAX_PATTERN_ORDER: usize = 16;

/// Default cap on pattern order for cover enumeration.
pub const DEFAULT_PATTERN_CAP: usize = 8;

/// A set of pattern vertices stored as a bitmask (bit `i` = vertex `i`, 0-indexed).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSubset(pub u32);

impl VertexSubset {
    pub const EMPTY: VertexSubset = VertexSubset(0);

    pub fn full(h: usize) -> Self {
        VertexSubset(if h >= 32 { u32::MAX } else { (1u32 << h) - 1 })
    }

    pub fn singleton(v: usize) -> Self {
        VertexSubset(1 << v)
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(vs: I) -> Self {
        VertexSubset(vs.into_iter().fold(0, |m, v| m | (1 << v)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn intersect(self, other: Self) -> Self {
        VertexSubset(self.0 & other.0)
    }

    pub fn union(self, other: Self) -> Self {
        VertexSubset(self.0 | other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Vertices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    /// 1-indexed ids, the external convention.
    pub fn to_ids(self) -> Vec<usize> {
        self.iter().map(|v| v + 1).collect()
    }

    /// All nonempty subsets of `{0..h}` in increasing bitmask order.
    pub fn nonempty_subsets(h: usize) -> impl Iterator<Item = VertexSubset> {
        (1..=VertexSubset::full(h).0).map(VertexSubset)
    }
}

impl fmt::Debug for VertexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "}}")
    }
}

impl Serialize for VertexSubset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_ids().serialize(s)
    }
}

/// Index of the unordered pair `{u, v}` in a packed edge bitmask.
#[inline]
pub fn pair_index(u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    b * (b - 1) / 2 + a
}

/// Small labelled undirected graph: the pattern whose induced copies are counted.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PatternGraph {
    rows: Vec<u32>,
}

impl PatternGraph {
    /// Builds a pattern from 0-indexed edges. Requires `h >= 2`, at least one
    /// edge, no self-loops and `h <= MAX_PATTERN_ORDER`.
    pub fn new(h: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if h < 2 {
            return Err(Error::InvalidPattern(format!("need at least 2 vertices, got {h}")));
        }
        if h > MAX_PATTERN_ORDER {
            return Err(Error::CapExceeded {
                what: "pattern order",
                actual: h as u128,
                cap: MAX_PATTERN_ORDER as u128,
            });
        }
        let mut rows = vec![0u32; h];
        for &(u, v) in edges {
            if u >= h || v >= h {
                return Err(Error::InvalidPattern(format!(
                    "edge ({}, {}) out of range for {h} vertices",
                    u + 1,
                    v + 1
                )));
            }
            if u == v {
                return Err(Error::InvalidPattern(format!("self-loop at vertex {}", u + 1)));
            }
            rows[u] |= 1 << v;
            rows[v] |= 1 << u;
        }
        let g = PatternGraph { rows };
        if g.edge_count() == 0 {
            return Err(Error::InvalidPattern("pattern has no edges".into()));
        }
        Ok(g)
    }

    /// No edge-count or order checks; used for induced subgraphs and unions.
    pub(crate) fn from_rows(rows: Vec<u32>) -> Self {
        PatternGraph { rows }
    }

    pub fn complete(h: usize) -> Result<Self> {
        let edges: Vec<_> = (0..h).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
        Self::new(h, &edges)
    }

    /// Cycle `1-2-...-t-1`.
    pub fn cycle(t: usize) -> Result<Self> {
        if t < 3 {
            return Err(Error::InvalidPattern(format!("cycle needs t >= 3, got {t}")));
        }
        let edges: Vec<_> = (0..t).map(|i| (i, (i + 1) % t)).collect();
        Self::new(t, &edges)
    }

    /// Path on `h` vertices.
    pub fn path(h: usize) -> Result<Self> {
        let edges: Vec<_> = (1..h).map(|i| (i - 1, i)).collect();
        Self::new(h, &edges)
    }

    /// `K_{k,t}` with parts `{0..k}` and `{k..k+t}`.
    pub fn complete_bipartite(k: usize, t: usize) -> Result<Self> {
        let edges: Vec<_> = (0..k).flat_map(|a| (k..k + t).map(move |b| (a, b))).collect();
        Self::new(k + t, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.rows.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> VertexSubset {
        VertexSubset(self.rows[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn vertices(&self) -> VertexSubset {
        VertexSubset::full(self.vertex_count())
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let h = self.vertex_count();
        (0..h)
            .flat_map(|u| (u + 1..h).filter(move |&v| self.rows[u] >> v & 1 == 1).map(move |v| (u, v)))
            .collect()
    }

    /// Packed edge bitmask (see [`pair_index`]).
    pub fn edge_mask(&self) -> u128 {
        self.edges().into_iter().fold(0u128, |m, (u, v)| m | 1 << pair_index(u, v))
    }

    /// `|E(S)|`.
    pub fn edges_within(&self, s: VertexSubset) -> usize {
        s.iter().map(|v| (self.rows[v] & s.0).count_ones() as usize).sum::<usize>() / 2
    }

    /// True when `s` induces a clique (singletons and the empty set count).
    pub fn is_clique(&self, s: VertexSubset) -> bool {
        s.iter().all(|v| (self.rows[v] | 1 << v) & s.0 == s.0)
    }

    /// `H[S]` with vertices relabelled to `0..|S|` in increasing order.
    /// The result may be edgeless.
    pub fn induced_subgraph(&self, s: VertexSubset) -> Result<PatternGraph> {
        if s.is_empty() {
            return Err(Error::InvalidParameter("induced subgraph of the empty set".into()));
        }
        if !s.is_subset_of(self.vertices()) {
            return Err(Error::InvalidParameter(format!("{s:?} is not a vertex subset")));
        }
        let verts: Vec<usize> = s.iter().collect();
        let rows = verts
            .iter()
            .map(|&u| {
                verts
                    .iter()
                    .enumerate()
                    .filter(|&(_, &v)| self.has_edge(u, v))
                    .fold(0u32, |m, (j, _)| m | 1 << j)
            })
            .collect();
        Ok(PatternGraph::from_rows(rows))
    }

    /// Relabel vertices: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> PatternGraph {
        let h = self.vertex_count();
        let mut rows = vec![0u32; h];
        for (u, v) in self.edges() {
            rows[perm[u]] |= 1 << perm[v];
            rows[perm[v]] |= 1 << perm[u];
        }
        PatternGraph::from_rows(rows)
    }

    /// Fails unless the order is within `cap`.
    pub fn check_cap(&self, cap: usize) -> Result<()> {
        if self.vertex_count() > cap.min(MAX_PATTERN_ORDER) {
            return Err(Error::CapExceeded {
                what: "pattern order",
                actual: self.vertex_count() as u128,
                cap: cap.min(MAX_PATTERN_ORDER) as u128,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self.edges().into_iter().map(|(u, v)| (u + 1, v + 1)).collect();
        write!(f, "PatternGraph(h={}, {:?})", self.vertex_count(), edges)
    }
}
