//! Erdős–Rényi side density conditions: strict balance and its margin κ.

use super::pattern::{PatternGraph, VertexSubset};
use crate::rational::Rational;

fn proper_subsets(h0: &PatternGraph) -> impl Iterator<Item = VertexSubset> + '_ {
    let full = h0.vertices();
    VertexSubset::nonempty_subsets(h0.vertex_count()).filter(move |&s| s != full)
}

/// True iff every proper nonempty `S` has `|E(S)|/|S| < e/h`.
pub fn is_strictly_balanced(h0: &PatternGraph) -> bool {
    let density = Rational::new(h0.edge_count() as i64, h0.vertex_count() as i64);
    proper_subsets(h0).all(|s| Rational::new(h0.edges_within(s) as i64, s.len() as i64) < density)
}

/// `min |E(S)| (|S|/|E(S)| - h/e)` over proper nonempty `S` with at least one
/// edge. `None` when no such `S` exists (e.g. `K2`).
pub fn kappa(h0: &PatternGraph) -> Option<Rational> {
    let ratio = Rational::new(h0.vertex_count() as i64, h0.edge_count() as i64);
    proper_subsets(h0)
        .filter_map(|s| {
            let e = h0.edges_within(s) as i64;
            (e > 0).then(|| Rational::from(e) * (Rational::new(s.len() as i64, e) - ratio.clone()))
        })
        .min()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_balance_examples() {
        assert!(is_strictly_balanced(&PatternGraph::complete(3).unwrap()));
        assert!(is_strictly_balanced(&PatternGraph::cycle(4).unwrap()));
        let two_edges = PatternGraph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!is_strictly_balanced(&two_edges));
        for h in 3..=8 {
            assert!(is_strictly_balanced(&PatternGraph::complete(h).unwrap()));
        }
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(&PatternGraph::complete(3).unwrap()), Some(Rational::from(1i64)));
        assert_eq!(kappa(&PatternGraph::cycle(4).unwrap()), Some(Rational::from(1i64)));
        assert_eq!(kappa(&PatternGraph::complete(2).unwrap()), None);
    }
}
