//! Exact probability that a fixed copy is induced by a given cover.

use serde::Serialize;

use super::sum::{log_sum_exp, CompensatedSum};
use crate::cover::{clique_edge_mask, CliqueCover};
use crate::error::{Error, Result};
use crate::graph::{PatternGraph, VertexSubset};

/// Largest cover handled (inclusion–exclusion has `2^t` terms).
pub const MAX_COVER_CLIQUES: usize = 20;

/// Above this total scaled weight `Σ m qᵢ` the series gives way to
/// inclusion–exclusion.
pub const SERIES_LIMIT: f64 = 600.0;

/// Per-object pattern probabilities on the `h` vertices of a copy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternWeights {
    pub h: usize,
    pub p: f64,
    /// `qᵢ = p^{|Cᵢ|} (1-p)^{h-|Cᵢ|}`
    pub q: Vec<f64>,
    pub ln_q: Vec<f64>,
    /// `q₀ = (1-p)^h + h p (1-p)^{h-1}`: the object meets at most one copy vertex.
    pub q0: f64,
    /// `ln q₀`, computed from the complement so it stays accurate for small `p`.
    pub ln_q0: f64,
}

/// `Σ_{j>=2} C(h,j) p^j (1-p)^{h-j}`, the chance an object meets two or more of `h` vertices.
fn multi_hit(h: usize, p: f64) -> f64 {
    let mut binom = 1.0;
    let mut s = CompensatedSum::default();
    for j in 0..=h {
        if j >= 2 {
            s.add(binom * p.powi(j as i32) * (1.0 - p).powi((h - j) as i32));
        }
        binom = binom * (h - j) as f64 / (j + 1) as f64;
    }
    s.value()
}

impl PatternWeights {
    pub fn new(h: usize, cliques: &[VertexSubset], p: f64) -> Self {
        let ln1mp = (-p).ln_1p();
        let ln_q: Vec<f64> = cliques
            .iter()
            .map(|c| {
                let k = c.len();
                let mut v = k as f64 * p.ln();
                if h > k {
                    v += (h - k) as f64 * ln1mp;
                }
                v
            })
            .collect();
        let q = ln_q.iter().map(|l| l.exp()).collect();
        let ln_q0 = (-multi_hit(h, p)).ln_1p();
        PatternWeights {
            h,
            p,
            q,
            ln_q,
            q0: ln_q0.exp(),
            ln_q0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PiMethod {
    /// Closed form for `p ∈ {0, 1}` or `m < t`.
    Degenerate,
    Series,
    InclusionExclusion,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExactPi {
    pub value: f64,
    pub ln_value: f64,
    pub method: PiMethod,
}

impl ExactPi {
    fn from_ln(ln_value: f64, method: PiMethod) -> Self {
        ExactPi {
            value: ln_value.exp(),
            ln_value,
            method,
        }
    }
}

fn check_inputs(h0: &PatternGraph, cover: &CliqueCover, m: u64, p: f64) -> Result<()> {
    cover
        .check(h0)
        .map_err(|v| Error::InvalidParameter(format!("not a proper clique cover: {v:?}")))?;
    if cover.len() > MAX_COVER_CLIQUES {
        return Err(Error::CapExceeded {
            what: "cover cliques for exact probability",
            actual: cover.len() as u128,
            cap: MAX_COVER_CLIQUES as u128,
        });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p must lie in [0, 1], got {p}")));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    Ok(())
}

fn degenerate(h0: &PatternGraph, cover: &CliqueCover, m: u64, p: f64) -> Option<ExactPi> {
    let zero = ExactPi {
        value: 0.0,
        ln_value: f64::NEG_INFINITY,
        method: PiMethod::Degenerate,
    };
    if p == 0.0 || (m as usize) < cover.len() {
        return Some(zero);
    }
    if p == 1.0 {
        let whole = cover.cliques() == [h0.vertices()];
        return Some(if whole {
            ExactPi {
                value: 1.0,
                ln_value: 0.0,
                method: PiMethod::Degenerate,
            }
        } else {
            zero
        });
    }
    None
}

/// Probability that every object meets the copy in one of the cover's
/// cliques or in at most one vertex, and each clique is met exactly by some
/// object.
pub fn exact_pi(h0: &PatternGraph, cover: &CliqueCover, m: u64, p: f64) -> Result<f64> {
    exact_pi_detail(h0, cover, m, p).map(|e| e.value)
}

pub fn exact_pi_detail(h0: &PatternGraph, cover: &CliqueCover, m: u64, p: f64) -> Result<ExactPi> {
    check_inputs(h0, cover, m, p)?;
    if let Some(d) = degenerate(h0, cover, m, p) {
        return Ok(d);
    }
    let w = PatternWeights::new(h0.vertex_count(), cover.cliques(), p);
    let total: f64 = w.ln_q.iter().map(|l| (l + (m as f64).ln()).exp()).sum();
    Ok(if total <= SERIES_LIMIT {
        series(&w, m)
    } else {
        inclusion_exclusion(&w, m)
    })
}

/// The inclusion–exclusion form `Σ_T (-1)^{t-|T|} (q₀ + Σ_{i∈T} qᵢ)^m`,
/// summed with compensation. Exposed for cross-checks.
pub fn exact_pi_inclusion_exclusion(h0: &PatternGraph, cover: &CliqueCover, m: u64, p: f64) -> Result<f64> {
    check_inputs(h0, cover, m, p)?;
    if let Some(d) = degenerate(h0, cover, m, p) {
        return Ok(d.value);
    }
    let w = PatternWeights::new(h0.vertex_count(), cover.cliques(), p);
    Ok(inclusion_exclusion(&w, m).value)
}

fn inclusion_exclusion(w: &PatternWeights, m: u64) -> ExactPi {
    let t = w.q.len();
    let miss = 1.0 - w.q0;
    let mut s = CompensatedSum::default();
    for pick in 0u32..(1u32 << t) {
        let inside: f64 = (0..t).filter(|i| pick >> i & 1 == 1).map(|i| w.q[i]).sum();
        // q₀ + inside = 1 - (miss - inside)
        let term = (m as f64 * (-(miss - inside)).ln_1p()).exp();
        if (t - pick.count_ones() as usize).is_multiple_of(2) {
            s.add(term);
        } else {
            s.add(-term);
        }
    }
    let v = s.value().max(0.0);
    ExactPi {
        value: v,
        ln_value: v.ln(),
        method: PiMethod::InclusionExclusion,
    }
}

/// Cancellation-free form. Writing `kᵢ = 1 + jᵢ` for the number of objects
/// on clique `i` and `φ(u) = (e^u - 1)/u`,
/// `π = Πqᵢ Σ_k (m)_{t+k} q₀^{m-t-k} [w^k] Π φ(qᵢ w)`.
/// With `μᵢ = m qᵢ` this becomes
/// `Πμᵢ Σ_k ((m)_{t+k}/m^{t+k}) q₀^{m-t-k} [w^k] Π φ(μᵢ w)`, a sum of positive terms.
fn series(w: &PatternWeights, m: u64) -> ExactPi {
    let t = w.q.len();
    let mf = m as f64;
    let mu: Vec<f64> = w.ln_q.iter().map(|l| (l + mf.ln()).exp()).collect();
    let total: f64 = mu.iter().sum::<f64>() / w.q0;
    let kmax = ((total + 12.0 * total.sqrt() + 40.0).ceil() as u64).min(m - t as u64) as usize;

    let mut coeffs = vec![0.0; kmax + 1];
    coeffs[0] = 1.0;
    for &x in &mu {
        // φ(x w) = Σ_j x^j/(j+1)! w^j
        let mut phi = vec![0.0; kmax + 1];
        let mut term = 1.0;
        for (j, slot) in phi.iter_mut().enumerate() {
            *slot = term;
            term *= x / (j + 2) as f64;
        }
        let mut next = vec![0.0; kmax + 1];
        for (a, &ca) in coeffs.iter().enumerate().filter(|(_, c)| **c != 0.0) {
            for (b, &pb) in phi[..=kmax - a].iter().enumerate() {
                next[a + b] += ca * pb;
            }
        }
        coeffs = next;
    }

    // ln((m)_{t+k} / m^{t+k})
    let mut ln_fall: f64 = (0..t).map(|j| (-(j as f64) / mf).ln_1p()).sum();
    let mut logs = Vec::with_capacity(kmax + 1);
    for (k, &c) in coeffs.iter().enumerate() {
        if c > 0.0 {
            let rest = (m - (t + k) as u64) as f64;
            logs.push(c.ln() + ln_fall + rest * w.ln_q0);
        }
        ln_fall += (-((t + k) as f64) / mf).ln_1p();
    }
    let ln_mu: f64 = mu.iter().map(|x| x.ln()).sum();
    ExactPi::from_ln(ln_mu + log_sum_exp(&logs), PiMethod::Series)
}

/// Probability that a fixed `h`-set induces `h0` (by any cover), by dynamic
/// programming over objects on the edge mask they generate.
pub fn exact_copy_probability(h0: &PatternGraph, m: u64, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p must lie in [0, 1], got {p}")));
    }
    let h = h0.vertex_count();
    let target = h0.edge_mask();
    let mut moves: std::collections::BTreeMap<u128, f64> = std::collections::BTreeMap::new();
    for bits in 0u32..(1u32 << h) {
        let s = VertexSubset(bits);
        let mask = clique_edge_mask(s);
        if mask & !target != 0 {
            continue;
        }
        let k = s.len() as i32;
        *moves.entry(mask).or_default() += p.powi(k) * (1.0 - p).powi(h as i32 - k);
    }
    let mut state: std::collections::BTreeMap<u128, f64> = [(0u128, 1.0)].into();
    for _ in 0..m {
        let mut next: std::collections::BTreeMap<u128, f64> = std::collections::BTreeMap::new();
        for (&a, &pa) in &state {
            for (&b, &pb) in &moves {
                *next.entry(a | b).or_default() += pa * pb;
            }
        }
        state = next;
    }
    Ok(state.get(&target).copied().unwrap_or(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::enumerate_proper_covers;

    #[test]
    fn single_clique_closed_form() {
        let k3 = PatternGraph::complete(3).unwrap();
        let tri = CliqueCover::from_ids(&[&[1, 2, 3]]);
        for (m, p) in [(1u64, 0.3), (5, 0.1), (1000, 0.001), (7, 0.6)] {
            let w = PatternWeights::new(3, tri.cliques(), p);
            // (q0 + q1)^m - q0^m = q0^m (exp(m ln(1 + q1/q0)) - 1)
            let mf = m as f64;
            let want = (mf * w.ln_q0).exp() * (mf * (w.q[0] / w.q0).ln_1p()).exp_m1();
            let got = exact_pi(&k3, &tri, m, p).unwrap();
            assert!((got - want).abs() <= 1e-12 * want.max(1e-300) + 1e-15, "{m} {p}: {got} vs {want}");
        }
        let p = 0.35f64;
        assert!((exact_pi(&k3, &tri, 1, p).unwrap() - p.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn degenerate_cases() {
        let k3 = PatternGraph::complete(3).unwrap();
        let tri = CliqueCover::from_ids(&[&[1, 2, 3]]);
        let edges = CliqueCover::from_ids(&[&[1, 2], &[1, 3], &[2, 3]]);
        assert_eq!(exact_pi(&k3, &tri, 4, 0.0).unwrap(), 0.0);
        assert_eq!(exact_pi(&k3, &tri, 4, 1.0).unwrap(), 1.0);
        assert_eq!(exact_pi(&k3, &edges, 4, 1.0).unwrap(), 0.0);
        assert_eq!(exact_pi(&k3, &edges, 2, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn series_matches_inclusion_exclusion() {
        let k4 = PatternGraph::complete(4).unwrap();
        let covers = enumerate_proper_covers(&k4).unwrap();
        for cover in covers.iter().step_by(37) {
            for (m, p) in [(20u64, 0.2), (200, 0.05), (3000, 0.02)] {
                let a = exact_pi(&k4, cover, m, p).unwrap();
                let b = exact_pi_inclusion_exclusion(&k4, cover, m, p).unwrap();
                assert!((a - b).abs() < 1e-12 + 1e-9 * a, "{cover:?} {m} {p}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn covers_partition_copy_event() {
        for g in [PatternGraph::complete(3).unwrap(), PatternGraph::path(3).unwrap(), PatternGraph::cycle(4).unwrap()] {
            for (m, p) in [(3u64, 0.3), (6, 0.2)] {
                let sum: f64 = enumerate_proper_covers(&g)
                    .unwrap()
                    .iter()
                    .map(|c| exact_pi(&g, c, m, p).unwrap())
                    .sum();
                let direct = exact_copy_probability(&g, m, p).unwrap();
                assert!((sum - direct).abs() < 1e-13, "{g:?}: {sum} vs {direct}");
            }
        }
    }
}
