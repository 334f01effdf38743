//! Seeded sampling of the incidence model, its intersection graph, and the
//! matched Erdős–Rényi graph.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::HostGraph;

/// Probabilities below this use geometric skipping under [`SamplingMethod::Auto`].
pub const SKIP_BELOW: f64 = 0.01;

/// Master seed plus replicate index. Replicate `r` draws from ChaCha8 stream
/// `r` under key `master`, so its sample does not depend on which other
/// replicates ran or in what order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SeedSpec {
    pub master: u64,
    pub replicate: u64,
}

impl SeedSpec {
    pub fn new(master: u64, replicate: u64) -> Self {
        SeedSpec { master, replicate }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.replicate);
        rng
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMethod {
    /// Skip for `p < SKIP_BELOW`, Bernoulli otherwise.
    #[default]
    Auto,
    Bernoulli,
    Skip,
}

/// Chooser sets of `m` objects over `n` vertices, stored object by object.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IncidenceSample {
    pub n: usize,
    pub m: usize,
    pub p: f64,
    pub seed: Option<SeedSpec>,
    offsets: Vec<usize>,
    members: Vec<u32>,
}

impl IncidenceSample {
    /// Sample from explicit chooser sets (duplicates and order are ignored).
    pub fn from_choosers(n: usize, choosers: &[Vec<u32>]) -> Result<Self> {
        let mut offsets = vec![0];
        let mut members = Vec::new();
        for set in choosers {
            let mut set = set.clone();
            set.sort_unstable();
            set.dedup();
            if let Some(&v) = set.iter().find(|&&v| v as usize >= n) {
                return Err(Error::InvalidParameter(format!("chooser {v} out of range for n = {n}")));
            }
            members.extend(set);
            offsets.push(members.len());
        }
        Ok(IncidenceSample {
            n,
            m: choosers.len(),
            p: f64::NAN,
            seed: None,
            offsets,
            members,
        })
    }

    /// Vertices that chose object `w`, increasing.
    pub fn choosers(&self, w: usize) -> &[u32] {
        &self.members[self.offsets[w]..self.offsets[w + 1]]
    }

    pub fn incidence_count(&self) -> usize {
        self.members.len()
    }

    /// Objects chosen by each vertex, as a vertex-indexed CSR.
    pub fn vertex_index(&self) -> VertexIndex {
        let mut offsets = vec![0usize; self.n + 1];
        for &v in &self.members {
            offsets[v as usize + 1] += 1;
        }
        for i in 0..self.n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut objects = vec![0u32; self.members.len()];
        for w in 0..self.m {
            for &v in self.choosers(w) {
                objects[fill[v as usize]] = w as u32;
                fill[v as usize] += 1;
            }
        }
        VertexIndex { offsets, objects }
    }
}

/// Inverted incidence: vertex to the objects it chose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexIndex {
    offsets: Vec<usize>,
    objects: Vec<u32>,
}

impl VertexIndex {
    /// Objects of vertex `v`, increasing.
    pub fn objects(&self, v: usize) -> &[u32] {
        &self.objects[self.offsets[v]..self.offsets[v + 1]]
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("probability must lie in [0, 1], got {p}")))
    }
}

/// Calls `hit(i)` for each index in `0..len` whose Bernoulli(`p`) draw succeeds.
fn bernoulli_hits<R: Rng>(rng: &mut R, len: u64, p: f64, skip: bool, mut hit: impl FnMut(u64)) {
    if p <= 0.0 || len == 0 {
        return;
    }
    if p >= 1.0 {
        (0..len).for_each(hit);
        return;
    }
    if skip {
        let gap = Geometric::new(p).expect("0 < p < 1");
        let mut i = gap.sample(rng);
        while i < len {
            hit(i);
            i = i.saturating_add(1).saturating_add(gap.sample(rng));
        }
    } else {
        for i in 0..len {
            if rng.random_bool(p) {
                hit(i);
            }
        }
    }
}

fn use_skip(p: f64, method: SamplingMethod) -> bool {
    match method {
        SamplingMethod::Auto => p < SKIP_BELOW,
        SamplingMethod::Bernoulli => false,
        SamplingMethod::Skip => true,
    }
}

/// Every vertex picks every object independently with probability `p`.
pub fn sample_incidence(n: usize, m: usize, p: f64, seed: SeedSpec) -> Result<IncidenceSample> {
    sample_incidence_with(n, m, p, seed, SamplingMethod::Auto)
}

pub fn sample_incidence_with(n: usize, m: usize, p: f64, seed: SeedSpec, method: SamplingMethod) -> Result<IncidenceSample> {
    check_probability(p)?;
    if n > u32::MAX as usize {
        return Err(Error::InvalidParameter(format!("n = {n} exceeds 32-bit vertex ids")));
    }
    let mut rng = seed.rng();
    let skip = use_skip(p, method);
    let mut offsets = Vec::with_capacity(m + 1);
    offsets.push(0);
    let mut members = Vec::new();
    for _ in 0..m {
        bernoulli_hits(&mut rng, n as u64, p, skip, |v| members.push(v as u32));
        offsets.push(members.len());
    }
    Ok(IncidenceSample {
        n,
        m,
        p,
        seed: Some(seed),
        offsets,
        members,
    })
}

/// Intersection graph: the union over objects of the clique on each chooser set.
pub fn project_graph(s: &IncidenceSample) -> HostGraph {
    let mut pairs = Vec::new();
    for w in 0..s.m {
        let set = s.choosers(w);
        for (i, &u) in set.iter().enumerate() {
            for &v in &set[i + 1..] {
                pairs.push((u, v));
                pairs.push((v, u));
            }
        }
    }
    HostGraph::from_sorted_pairs(s.n, pairs)
}

/// `G(n, p̂)`: each of the `C(n,2)` pairs independently with probability `p̂`.
pub fn sample_gnp(n: usize, p_hat: f64, seed: SeedSpec) -> Result<HostGraph> {
    sample_gnp_with(n, p_hat, seed, SamplingMethod::Auto)
}

pub fn sample_gnp_with(n: usize, p_hat: f64, seed: SeedSpec, method: SamplingMethod) -> Result<HostGraph> {
    check_probability(p_hat)?;
    let mut rng = seed.rng();
    let total = (n as u64) * (n as u64).saturating_sub(1) / 2;
    let mut pairs = Vec::new();
    // Pair index k enumerates (u, v), u < v, row by row in v.
    let (mut v, mut row_start) = (1u64, 0u64);
    bernoulli_hits(&mut rng, total, p_hat, use_skip(p_hat, method), |k| {
        while k >= row_start + v {
            row_start += v;
            v += 1;
        }
        let u = (k - row_start) as u32;
        pairs.push((u, v as u32));
        pairs.push((v as u32, u));
    });
    Ok(HostGraph::from_sorted_pairs(n, pairs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PHatMode {
    /// `m p²`
    Linear,
    /// `1 - (1 - p²)^m`, the exact edge probability.
    Exact,
}

/// Matched Erdős–Rényi edge probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MatchedProbability {
    pub value: f64,
    /// `m p² > 1` was clamped to 1.
    pub clamped: bool,
}

pub fn p_hat(m: u64, p: f64, mode: PHatMode) -> Result<MatchedProbability> {
    check_probability(p)?;
    let p2 = p * p;
    Ok(match mode {
        PHatMode::Linear => {
            let v = m as f64 * p2;
            MatchedProbability {
                value: v.min(1.0),
                clamped: v > 1.0,
            }
        }
        PHatMode::Exact => MatchedProbability {
            value: -(m as f64 * (-p2).ln_1p()).exp_m1(),
            clamped: false,
        },
    })
}
