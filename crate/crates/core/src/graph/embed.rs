//! Induced embeddings of a pattern into a host by degree-ordered backtracking.
//!
//! A labelled induced embedding is an injective map `f: V(H0) -> V(host)` with
//! `{u,v} ∈ E(H0)  <=>  {f(u),f(v)} ∈ E(host)`. Every unordered induced copy
//! corresponds to exactly `|aut(H0)|` labelled embeddings.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::host::HostGraph;
use super::pattern::PatternGraph;
use crate::error::{Error, Result};

/// Search order and per-position constraints for one pattern.
#[derive(Clone, Debug)]
struct Plan {
    /// `order[i]` is the pattern vertex placed at depth `i`.
    order: Vec<usize>,
    /// Earlier depths that must be adjacent to depth `i`.
    adjacent: Vec<Vec<usize>>,
    /// Earlier depths that must be non-adjacent to depth `i`.
    non_adjacent: Vec<Vec<usize>>,
    degree: Vec<usize>,
}

impl Plan {
    fn new(pattern: &PatternGraph) -> Self {
        let h = pattern.vertex_count();
        let mut order = Vec::with_capacity(h);
        let mut placed = 0u32;
        while order.len() < h {
            let next = (0..h)
                .filter(|&v| placed >> v & 1 == 0)
                .max_by_key(|&v| {
                    let linked = (pattern.neighbors(v).0 & placed).count_ones();
                    (linked, pattern.degree(v), std::cmp::Reverse(v))
                })
                .expect("unplaced vertex");
            order.push(next);
            placed |= 1 << next;
        }
        let mut adjacent = vec![Vec::new(); h];
        let mut non_adjacent = vec![Vec::new(); h];
        for i in 0..h {
            for j in 0..i {
                if pattern.has_edge(order[i], order[j]) {
                    adjacent[i].push(j);
                } else {
                    non_adjacent[i].push(j);
                }
            }
        }
        let degree = order.iter().map(|&v| pattern.degree(v)).collect();
        Plan {
            order,
            adjacent,
            non_adjacent,
            degree,
        }
    }

    fn accepts(&self, host: &HostGraph, depth: usize, image: &[u32], v: usize) -> bool {
        host.degree(v) >= self.degree[depth]
            && !image[..depth].contains(&(v as u32))
            && self.adjacent[depth].iter().all(|&j| host.has_edge(image[j] as usize, v))
            && self.non_adjacent[depth].iter().all(|&j| !host.has_edge(image[j] as usize, v))
    }

    fn extend<F: FnMut(&[u32])>(&self, host: &HostGraph, depth: usize, image: &mut [u32], visit: &mut F) {
        if depth == self.order.len() {
            visit(image);
            return;
        }
        match self.adjacent[depth]
            .iter()
            .min_by_key(|&&j| host.degree(image[j] as usize))
        {
            Some(&anchor) => {
                let a = image[anchor] as usize;
                for &v in host.neighbors(a) {
                    if self.accepts(host, depth, image, v as usize) {
                        image[depth] = v;
                        self.extend(host, depth + 1, image, visit);
                    }
                }
            }
            None => {
                for v in 0..host.vertex_count() {
                    if self.accepts(host, depth, image, v) {
                        image[depth] = v as u32;
                        self.extend(host, depth + 1, image, visit);
                    }
                }
            }
        }
    }

    /// Runs the search with the first pattern vertex restricted to `first`.
    fn run_from<F: FnMut(&[u32])>(&self, host: &HostGraph, first: std::ops::Range<usize>, visit: &mut F) {
        let h = self.order.len();
        let mut image = vec![0u32; h];
        let mut by_pattern = vec![0u32; h];
        let mut forward = |img: &[u32]| {
            for (i, &p) in self.order.iter().enumerate() {
                by_pattern[p] = img[i];
            }
            visit(&by_pattern);
        };
        for v in first {
            if self.accepts(host, 0, &image, v) {
                image[0] = v as u32;
                self.extend(host, 1, &mut image, &mut forward);
            }
        }
    }
}

/// Calls `visit` once per labelled induced embedding; the slice is indexed by
/// pattern vertex and holds host vertex ids.
pub fn for_each_induced_embedding<F: FnMut(&[u32])>(host: &HostGraph, pattern: &PatternGraph, mut visit: F) {
    if pattern.vertex_count() > host.vertex_count() {
        return;
    }
    Plan::new(pattern).run_from(host, 0..host.vertex_count(), &mut visit);
}

/// Number of labelled induced embeddings of `pattern` into `host`.
pub fn count_labelled_embeddings(host: &HostGraph, pattern: &PatternGraph) -> u128 {
    if pattern.vertex_count() > host.vertex_count() {
        return 0;
    }
    let plan = Plan::new(pattern);
    let n = host.vertex_count();
    let chunk = 256;
    (0..n.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut count = 0u128;
            plan.run_from(host, c * chunk..((c + 1) * chunk).min(n), &mut |_| count += 1);
            count
        })
        .sum()
}

fn pattern_as_host(pattern: &PatternGraph) -> HostGraph {
    HostGraph::from_edges(
        pattern.vertex_count(),
        pattern.edges().into_iter().map(|(u, v)| (u as u32, v as u32)),
    )
    .expect("pattern edges are in range")
}

/// All automorphisms, each as `perm[v] = image of v`, in lexicographic order.
pub fn automorphisms(pattern: &PatternGraph) -> Vec<Vec<usize>> {
    let host = pattern_as_host(pattern);
    let mut out = Vec::new();
    for_each_induced_embedding(&host, pattern, |emb| {
        out.push(emb.iter().map(|&v| v as usize).collect::<Vec<_>>())
    });
    out.sort();
    out
}

/// `|aut(H0)|`.
pub fn automorphism_count(pattern: &PatternGraph) -> u64 {
    count_labelled_embeddings(&pattern_as_host(pattern), pattern) as u64
}

/// `N_n = C(n,h) h! / |aut(H0)|`, the number of copies of `H0` in `K_n`.
pub fn count_pattern_copies(n: u64, pattern: &PatternGraph) -> BigUint {
    let h = pattern.vertex_count() as u64;
    if n < h {
        return BigUint::zero();
    }
    let falling = (0..h).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(n - i));
    falling / BigUint::from(automorphism_count(pattern))
}

/// `N_n` as a float, for expectations.
pub fn count_pattern_copies_f64(n: u64, pattern: &PatternGraph) -> f64 {
    count_pattern_copies(n, pattern).to_f64().unwrap_or(f64::INFINITY)
}

/// Number of induced copies of `pattern` in `host`.
pub fn count_induced_copies(host: &HostGraph, pattern: &PatternGraph) -> Result<u128> {
    let labelled = count_labelled_embeddings(host, pattern);
    let aut = automorphism_count(pattern) as u128;
    if !labelled.is_multiple_of(aut) {
        return Err(Error::Consistency(format!(
            "{labelled} labelled embeddings not divisible by |aut| = {aut}"
        )));
    }
    Ok(labelled / aut)
}

/// One induced copy: its host vertex set and a canonical embedding.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct InducedCopy {
    /// Host vertices, sorted.
    pub vertices: Vec<u32>,
    /// `embedding[v]` is the host vertex playing pattern vertex `v`; the
    /// lexicographically least among the `|aut(H0)|` embeddings of this copy.
    pub embedding: Vec<u32>,
}

/// Every induced copy exactly once, sorted by vertex set.
pub fn list_induced_copies(host: &HostGraph, pattern: &PatternGraph) -> Vec<InducedCopy> {
    let auts = automorphisms(pattern);
    let mut copies = Vec::new();
    for_each_induced_embedding(host, pattern, |emb| {
        // emb∘σ enumerates the orbit of this embedding.
        let least = auts.iter().all(|sigma| {
            let other = sigma.iter().map(|&s| emb[s]);
            emb.iter().copied().cmp(other) != std::cmp::Ordering::Greater
        });
        if least {
            let mut vertices = emb.to_vec();
            vertices.sort_unstable();
            copies.push(InducedCopy {
                vertices,
                embedding: emb.to_vec(),
            });
        }
    });
    copies.sort();
    copies
}

#[cfg(test)]
mod tests {
    use super::*;

    fn host_of(p: &PatternGraph) -> HostGraph {
        pattern_as_host(p)
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(automorphism_count(&PatternGraph::complete(4).unwrap()), 24);
        assert_eq!(automorphism_count(&PatternGraph::cycle(5).unwrap()), 10);
        assert_eq!(automorphism_count(&PatternGraph::path(3).unwrap()), 2);
        assert_eq!(automorphism_count(&PatternGraph::complete_bipartite(2, 3).unwrap()), 12);
    }

    #[test]
    fn pattern_copy_counts() {
        let k3 = PatternGraph::complete(3).unwrap();
        assert_eq!(count_pattern_copies(4, &k3), BigUint::from(4u32));
        assert_eq!(count_pattern_copies(5, &PatternGraph::cycle(4).unwrap()), BigUint::from(15u32));
        assert_eq!(count_pattern_copies(2, &k3), BigUint::zero());
        let p4 = PatternGraph::path(4).unwrap();
        assert_eq!(count_pattern_copies(4, &p4), BigUint::from(12u32));
    }

    #[test]
    fn induced_copy_examples() {
        let k2 = PatternGraph::complete(2).unwrap();
        let k4 = host_of(&PatternGraph::complete(4).unwrap());
        assert_eq!(count_induced_copies(&k4, &k2).unwrap(), 6);
        assert_eq!(count_induced_copies(&k4, &PatternGraph::cycle(4).unwrap()).unwrap(), 0);
        let c4 = host_of(&PatternGraph::cycle(4).unwrap());
        assert_eq!(count_induced_copies(&c4, &PatternGraph::path(3).unwrap()).unwrap(), 4);
    }

    #[test]
    fn listing_examples() {
        let k3 = PatternGraph::complete(3).unwrap();
        let k4 = host_of(&PatternGraph::complete(4).unwrap());
        assert_eq!(list_induced_copies(&k4, &k3).len(), 4);
        let edgeless = HostGraph::empty(5);
        assert!(list_induced_copies(&edgeless, &PatternGraph::complete(2).unwrap()).is_empty());
        let c5 = PatternGraph::cycle(5).unwrap();
        let copies = list_induced_copies(&host_of(&c5), &c5);
        assert_eq!(copies.len(), 1);
        assert_eq!(copies[0].embedding, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn pattern_larger_than_host() {
        let k3 = PatternGraph::complete(3).unwrap();
        assert_eq!(count_induced_copies(&HostGraph::empty(2), &k3).unwrap(), 0);
    }
}
