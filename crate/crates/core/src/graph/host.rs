use crate::error::{Error, Result};

/// Hosts up to this order also keep one bitset row per vertex.
pub const DENSE_ROW_LIMIT: usize = 8192;

/// Simple undirected graph on `0..n`: sorted adjacency lists, plus bitset rows
/// for constant-time adjacency tests when `n <= DENSE_ROW_LIMIT`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HostGraph {
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    rows: Option<Vec<u64>>,
    words: usize,
}

impl HostGraph {
    pub fn empty(n: usize) -> Self {
        Self::from_sorted_pairs(n, Vec::new())
    }

    /// Duplicate edges are merged. Self-loops and out-of-range ids are errors.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut pairs = Vec::new();
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at {u}")));
            }
            pairs.push((u, v));
            pairs.push((v, u));
        }
        Ok(Self::from_sorted_pairs(n, pairs))
    }

    /// `pairs` holds both orientations of every edge; order and duplicates are free.
    pub(crate) fn from_sorted_pairs(n: usize, mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &pairs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets: Vec<u32> = pairs.iter().map(|&(_, v)| v).collect();
        let words = n.div_ceil(64);
        let rows = (n <= DENSE_ROW_LIMIT).then(|| {
            let mut rows = vec![0u64; n * words];
            for &(u, v) in &pairs {
                rows[u as usize * words + v as usize / 64] |= 1 << (v % 64);
            }
            rows
        });
        HostGraph {
            n,
            offsets,
            targets,
            rows,
            words,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match &self.rows {
            Some(rows) => rows[u * self.words + v / 64] >> (v % 64) & 1 == 1,
            None => self.neighbors(u).binary_search(&(v as u32)).is_ok(),
        }
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| v as usize > u)
                .map(move |&v| (u as u32, v))
        })
    }
}
