//! Threshold exponents against an independent subset scan, symmetry checks,
//! closed forms for complete graphs and triangle-free patterns.

use proptest::prelude::*;
use rig_poisson::cover::{enumerate_proper_covers, CliqueCover};
use rig_poisson::graph::{automorphism_count, is_strictly_balanced, PatternGraph, VertexSubset};
use rig_poisson::threshold::{
    classify_balance, eta0, eta1, lambda0, phi, pi_order, pi_predict, BalanceVerdict, LambdaPolynomial,
};
use rig_poisson::Rational;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Exponent for one restriction family: `(|S| + α·count) / total`.
fn ratio(s: u32, alpha: &Rational, traces: &[u32]) -> Option<Rational> {
    let total: u32 = traces.iter().map(|t| t.count_ones()).sum();
    (total > 0).then(|| {
        (Rational::from(s.count_ones() as usize) + alpha.clone() * Rational::from(traces.len())) / Rational::from(total as usize)
    })
}

/// η₂ from its definition: the smaller of the two restriction exponents.
fn eta2_ref(cover: &[u32], s: u32, alpha: &Rational) -> Option<Rational> {
    let all: Vec<u32> = cover.iter().map(|c| c & s).filter(|t| *t != 0).collect();
    let big: Vec<u32> = all.iter().copied().filter(|t| t.count_ones() >= 2).collect();
    match (ratio(s, alpha, &all), ratio(s, alpha, &big)) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

fn eta1_ref(h: usize, cover: &CliqueCover, alpha: &Rational) -> Rational {
    let masks: Vec<u32> = cover.cliques().iter().map(|c| c.0).collect();
    (1u32..1 << h)
        .filter_map(|s| eta2_ref(&masks, s, alpha))
        .min()
        .expect("the full set meets every clique")
}

fn graph_from_mask(h: usize, mask: u32) -> Option<PatternGraph> {
    let pairs: Vec<(usize, usize)> = (0..h).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    let edges: Vec<_> = pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &e)| e)
        .collect();
    PatternGraph::new(h, &edges).ok()
}

fn small_graph(max_h: usize) -> impl Strategy<Value = PatternGraph> {
    (2..=max_h)
        .prop_flat_map(|h| (Just(h), 1u32..(1 << (h * (h - 1) / 2))))
        .prop_filter_map("needs an edge", |(h, mask)| graph_from_mask(h, mask))
}

fn alpha() -> impl Strategy<Value = Rational> {
    (1i64..=40, 1i64..=8).prop_map(|(a, b)| r(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eta0_matches_subset_scan(h0 in small_graph(4), a in alpha()) {
        let covers = enumerate_proper_covers(&h0).unwrap();
        let h = h0.vertex_count();
        let etas: Vec<Rational> = covers.iter().map(|c| eta1_ref(h, c, &a)).collect();
        for (c, e) in covers.iter().zip(&etas) {
            prop_assert_eq!(&eta1(&h0, c, &a).unwrap(), e);
        }
        let best = etas.iter().max().unwrap().clone();
        let critical: Vec<CliqueCover> = covers
            .iter()
            .zip(&etas)
            .filter(|(_, e)| **e == best)
            .map(|(c, _)| c.clone())
            .collect();
        let got = eta0(&h0, &a).unwrap();
        prop_assert_eq!(&got.eta0, &best);
        prop_assert_eq!(&got.critical, &critical);
    }

    #[test]
    fn relabelling_preserves_the_analysis(
        (h0, perm) in small_graph(5).prop_flat_map(|g| {
            let h = g.vertex_count();
            (Just(g), Just((0..h).collect::<Vec<_>>()).prop_shuffle())
        }),
        a in alpha(),
    ) {
        let moved = h0.permuted(&perm);
        let (x, y) = (eta0(&h0, &a).unwrap(), eta0(&moved, &a).unwrap());
        prop_assert_eq!(&x.eta0, &y.eta0);
        let mut mapped: Vec<CliqueCover> = x.critical.iter().map(|c| c.mapped(&perm)).collect();
        mapped.sort();
        prop_assert_eq!(&mapped, &y.critical);
        let (rx, ry) = (classify_balance(&h0, &a).unwrap(), classify_balance(&moved, &a).unwrap());
        prop_assert_eq!(rx.strictly_alpha_balanced, ry.strictly_alpha_balanced);
        prop_assert_eq!(&rx.lambda0, &ry.lambda0);
        prop_assert_eq!(automorphism_count(&h0), automorphism_count(&moved));
    }

    #[test]
    fn automorphisms_match_permutation_scan(h0 in small_graph(6)) {
        let h = h0.vertex_count();
        let mut perm: Vec<usize> = (0..h).collect();
        let mut count = 0u64;
        heap_permutations(&mut perm, h, &mut |p| {
            if h0.permuted(p) == h0 {
                count += 1;
            }
        });
        prop_assert_eq!(automorphism_count(&h0), count);
    }

    #[test]
    fn complete_graph_piecewise_exponent(h in 3usize..=5, a in alpha()) {
        let kh = PatternGraph::complete(h).unwrap();
        let hi = h as i64;
        let boundary = r(2 * hi, hi - 1);
        let fact: i64 = (1..=hi).product();
        let inv = r(1, fact);
        let (small, big) = (h as u32, (h * (h - 1)) as u32);
        let (want_eta, want_lambda) = if a < boundary {
            (Rational::one() + a.clone() / Rational::from(h), LambdaPolynomial::from_terms([(small, inv)]))
        } else if a == boundary {
            (r(hi + 1, hi - 1), LambdaPolynomial::from_terms([(small, inv.clone()), (big, inv)]))
        } else {
            (r(1, hi - 1) + a.clone() / Rational::from(2i64), LambdaPolynomial::from_terms([(big, inv)]))
        };
        let rep = classify_balance(&kh, &a).unwrap();
        prop_assert_eq!(rep.eta0, want_eta);
        prop_assert_eq!(rep.lambda0, want_lambda);
    }

    #[test]
    fn eta1_is_below_the_full_set(h0 in small_graph(4), a in alpha()) {
        let full = h0.vertices();
        for c in enumerate_proper_covers(&h0).unwrap() {
            let e1 = eta1(&h0, &c, &a).unwrap();
            let at_full = rig_poisson::threshold::eta2(&h0, &c, full, &a).unwrap().unwrap();
            prop_assert!(e1 <= at_full);
        }
    }

    #[test]
    fn lambda_increases_with_c(h0 in small_graph(4), a in alpha(), c in 0.05f64..5.0, dc in 0.01f64..2.0) {
        let lo = lambda0(&h0, &a, c).unwrap();
        let hi = lambda0(&h0, &a, c + dc).unwrap();
        prop_assert!(hi > lo);
    }
}

fn heap_permutations(xs: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        f(xs);
        return;
    }
    for i in 0..k {
        heap_permutations(xs, k - 1, f);
        let j = if k.is_multiple_of(2) { i } else { 0 };
        xs.swap(j, k - 1);
    }
}

#[test]
fn critical_covers_are_strictly_balanced_by_scan() {
    // Definitional check over every subset for strictly α-balanced fixtures.
    let fixtures = [
        (PatternGraph::complete(3).unwrap(), r(1, 1)),
        (PatternGraph::complete(4).unwrap(), r(5, 1)),
        (PatternGraph::cycle(5).unwrap(), r(1, 1)),
        (PatternGraph::complete_bipartite(2, 3).unwrap(), r(1, 1)),
    ];
    for (h0, a) in fixtures {
        let rep = classify_balance(&h0, &a).unwrap();
        assert!(rep.strictly_alpha_balanced, "{h0:?}");
        let full = h0.vertices();
        for c in &rep.critical {
            let masks: Vec<u32> = c.cliques().iter().map(|s| s.0).collect();
            let at_full = eta2_ref(&masks, full.0, &a).unwrap();
            assert_eq!(at_full, rep.eta0);
            for s in 1..full.0 {
                if let Some(e) = eta2_ref(&masks, s, &a) {
                    assert!(e > rep.eta0, "{h0:?} {c:?} S={:?}", VertexSubset(s));
                }
            }
        }
    }
}

#[test]
fn triangle_free_strictly_balanced_patterns() {
    let patterns = [
        PatternGraph::cycle(4).unwrap(),
        PatternGraph::cycle(5).unwrap(),
        PatternGraph::cycle(6).unwrap(),
        PatternGraph::complete_bipartite(2, 3).unwrap(),
    ];
    for h0 in patterns {
        assert!(is_strictly_balanced(&h0), "{h0:?}");
        let (h, e) = (h0.vertex_count() as i64, h0.edge_count() as i64);
        let covers = enumerate_proper_covers(&h0).unwrap();
        assert_eq!(covers.len(), 1, "triangle-free patterns have only the edge cover");
        let edges = &covers[0];
        assert!(edges.cliques().iter().all(|c| c.len() == 2));
        let aut = automorphism_count(&h0) as i64;
        let threshold = r(h, e);
        for a in [r(1, 10), r(1, 2), threshold.clone(), threshold.clone() + r(1, 100), r(2, 1), r(5, 1), r(17, 3)] {
            let full = rig_poisson::threshold::eta2(&h0, edges, h0.vertices(), &a).unwrap().unwrap();
            let closed = r(h, 2 * e) + a.clone() / Rational::from(2i64);
            assert_eq!(full, closed, "{h0:?} alpha {a}");
            if a > threshold {
                let rep = classify_balance(&h0, &a).unwrap();
                assert_eq!(rep.eta0, closed);
                assert_eq!(rep.critical, covers);
                assert!(rep.strictly_alpha_balanced, "{h0:?} alpha {a}");
                assert_eq!(rep.balance[0].verdict, BalanceVerdict::StrictlyBalanced);
                assert_eq!(rep.lambda0, LambdaPolynomial::from_terms([(2 * e as u32, r(1, aut))]));
            }
        }
    }
}

#[test]
fn complete_graphs_are_strictly_balanced() {
    for h in 3..=8 {
        assert!(is_strictly_balanced(&PatternGraph::complete(h).unwrap()));
    }
}

#[test]
fn phi_grows_along_n() {
    for (h0, a) in [
        (PatternGraph::complete(3).unwrap(), r(1, 1)),
        (PatternGraph::cycle(4).unwrap(), r(1, 1)),
        (PatternGraph::complete(4).unwrap(), r(3, 2)),
    ] {
        let values: Vec<f64> = [100u64, 1_000, 10_000, 100_000]
            .iter()
            .map(|&n| phi(&h0, &a, 1.0, n).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]), "{h0:?}: {values:?}");
    }
}

#[test]
fn order_and_prediction_agree_within_e() {
    let covers = [
        CliqueCover::from_ids(&[&[1, 2, 3]]),
        CliqueCover::from_ids(&[&[1], &[2, 3]]),
        CliqueCover::from_ids(&[&[1], &[2], &[3, 4]]),
        CliqueCover::from_ids(&[&[1, 2], &[2, 3], &[4]]),
    ];
    let e = std::f64::consts::E;
    for c in &covers {
        for m in [10u64, 1_000, 100_000] {
            for mp in [1e-3, 0.1, 0.5, 1.0, 2.0, 30.0].into_iter().filter(|&mp| mp <= m as f64) {
                let p = mp / m as f64;
                let order = pi_order(c, m, p).unwrap();
                let pred = pi_predict(c, m, p).unwrap().value;
                let q = order / pred;
                assert!((1.0 / e..=e).contains(&q), "{c:?} m={m} mp={mp}: {q}");
            }
        }
    }
}
