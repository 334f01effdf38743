//! Distributional checks on the samplers. Seeds, bins and significance
//! levels are fixed in advance; each test makes one draw of its statistic.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rig_poisson::sampler::{
    project_graph, sample_gnp_with, sample_incidence, sample_incidence_with, IncidenceSample, SamplingMethod,
    SeedSpec,
};
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete, DiscreteCDF};

/// Pearson statistic on bins `{0..=1}, 2, ..., 8, {9..}`.
fn chi_square_binomial(counts: &[u64], trials: u64, p: f64) -> (f64, f64) {
    let law = Binomial::new(p, trials).unwrap();
    let mut probs = vec![law.cdf(1)];
    probs.extend((2..=8).map(|k| law.pmf(k)));
    probs.push(1.0 - law.cdf(8));
    let mut observed = vec![0u64; probs.len()];
    for &c in counts {
        let bin = match c {
            0 | 1 => 0,
            2..=8 => c as usize - 1,
            _ => probs.len() - 1,
        };
        observed[bin] += 1;
    }
    let total = counts.len() as f64;
    let stat: f64 = observed
        .iter()
        .zip(&probs)
        .map(|(&o, &q)| (o as f64 - total * q).powi(2) / (total * q))
        .sum();
    let critical = ChiSquared::new((probs.len() - 1) as f64).unwrap().inverse_cdf(0.99);
    (stat, critical)
}

fn per_vertex_counts(n: usize, m: usize, p: f64, method: SamplingMethod, master: u64, reps: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for r in 0..reps {
        let s = sample_incidence_with(n, m, p, SeedSpec::new(master, r), method).unwrap();
        let index = s.vertex_index();
        out.extend((0..n).map(|v| index.objects(v).len() as u64));
    }
    out
}

#[test]
fn per_vertex_object_counts_are_binomial() {
    for (m, p, method) in [
        (100usize, 0.05, SamplingMethod::Bernoulli),
        (100, 0.05, SamplingMethod::Skip),
        (1000, 0.005, SamplingMethod::Auto),
    ] {
        let counts = per_vertex_counts(100, m, p, method, 31, 100);
        let (stat, critical) = chi_square_binomial(&counts, m as u64, p);
        assert!(stat < critical, "m={m} p={p} {method:?}: chi-square {stat:.2} >= {critical:.2}");
    }
}

#[test]
fn incidence_total_concentrates() {
    let reps = 10_000u64;
    let total: u64 = (0..reps)
        .map(|r| sample_incidence(100, 100, 0.05, SeedSpec::new(7, r)).unwrap().incidence_count() as u64)
        .sum();
    let trials = reps as f64 * 1e4;
    let sd = (trials * 0.05 * 0.95).sqrt();
    let z = (total as f64 - trials * 0.05) / sd;
    assert!(z.abs() < 4.0, "z = {z}");
    assert!(((total as f64 / reps as f64) - 500.0).abs() < 4.0 * sd / reps as f64);
}

/// Two-sample Kolmogorov–Smirnov statistic.
fn ks(a: &mut [u64], b: &mut [u64]) -> f64 {
    a.sort_unstable();
    b.sort_unstable();
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Critical value at level 1% for equal sample sizes `k`.
fn ks_critical(k: usize) -> f64 {
    1.628 * (2.0 / k as f64).sqrt()
}

#[test]
fn skip_and_bernoulli_paths_agree_on_edge_counts() {
    let reps = 1000u64;
    let edges = |method, master| -> Vec<u64> {
        (0..reps)
            .map(|r| {
                let s = sample_incidence_with(60, 60, 0.05, SeedSpec::new(master, r), method).unwrap();
                project_graph(&s).edge_count() as u64
            })
            .collect()
    };
    let mut skip = edges(SamplingMethod::Skip, 101);
    let mut bern = edges(SamplingMethod::Bernoulli, 202);
    let d = ks(&mut skip, &mut bern);
    assert!(d < ks_critical(reps as usize), "KS {d}");

    let gnp = |method, master| -> Vec<u64> {
        (0..reps)
            .map(|r| sample_gnp_with(80, 0.02, SeedSpec::new(master, r), method).unwrap().edge_count() as u64)
            .collect()
    };
    let mut skip = gnp(SamplingMethod::Skip, 303);
    let mut bern = gnp(SamplingMethod::Bernoulli, 404);
    let d = ks(&mut skip, &mut bern);
    assert!(d < ks_critical(reps as usize), "gnp KS {d}");
}

#[test]
fn gnp_edge_count_mean() {
    for (n, p_hat, master) in [(50usize, 0.1, 11u64), (200, 0.005, 12)] {
        let reps = 2000u64;
        let pairs = (n * (n - 1) / 2) as f64;
        let total: u64 = (0..reps)
            .map(|r| sample_gnp_with(n, p_hat, SeedSpec::new(master, r), SamplingMethod::Auto).unwrap().edge_count() as u64)
            .sum();
        let sd = (reps as f64 * pairs * p_hat * (1.0 - p_hat)).sqrt();
        let z = (total as f64 - reps as f64 * pairs * p_hat) / sd;
        assert!(z.abs() < 4.0, "n={n} p={p_hat}: z = {z}");
    }
}

#[test]
fn determinism_and_stream_independence() {
    let a = sample_incidence(40, 70, 0.08, SeedSpec::new(9, 3)).unwrap();
    let b = sample_incidence(40, 70, 0.08, SeedSpec::new(9, 3)).unwrap();
    assert_eq!(a, b);
    assert_eq!(project_graph(&a), project_graph(&b));
    let c = sample_incidence(40, 70, 0.08, SeedSpec::new(9, 4)).unwrap();
    let d = sample_incidence(40, 70, 0.08, SeedSpec::new(10, 3)).unwrap();
    assert_ne!(a, c);
    assert_ne!(a, d);
}

#[test]
fn projection_ignores_object_and_member_order() {
    let s = sample_incidence(30, 50, 0.1, SeedSpec::new(2, 0)).unwrap();
    let mut choosers: Vec<Vec<u32>> = (0..s.m).map(|w| s.choosers(w).to_vec()).collect();
    let base = project_graph(&IncidenceSample::from_choosers(30, &choosers).unwrap());
    assert_eq!(base, project_graph(&s));
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        choosers.shuffle(&mut rng);
        for c in &mut choosers {
            c.shuffle(&mut rng);
        }
        let g = project_graph(&IncidenceSample::from_choosers(30, &choosers).unwrap());
        assert_eq!(g, base);
    }
}

#[test]
fn extremes() {
    let none = sample_incidence(12, 9, 0.0, SeedSpec::new(1, 0)).unwrap();
    assert_eq!(none.incidence_count(), 0);
    assert_eq!(project_graph(&none).edge_count(), 0);
    let all = sample_incidence(12, 9, 1.0, SeedSpec::new(1, 0)).unwrap();
    assert_eq!(all.incidence_count(), 12 * 9);
    assert_eq!(project_graph(&all).edge_count(), 66);
}
