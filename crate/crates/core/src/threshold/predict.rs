//! Model parameters, the expected-count orders ψ, ω, Φ and the probability
//! predictors for a fixed copy being induced by a cover.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::eta::eta0;
use crate::cover::restrict::RestrictionStats;
use crate::cover::CliqueCover;
use crate::error::{Error, Result};
use crate::graph::{PatternGraph, VertexSubset};
use crate::rational::Rational;

/// Default cut-off above which `m p²` no longer counts as small.
pub const MP2_SMALL: f64 = 0.01;

/// `⌊n^α⌋`, computed exactly.
pub fn floor_power(n: u64, alpha: &Rational) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let (a, b) = alpha
        .to_i64_parts()
        .filter(|&(a, b)| a > 0 && b > 0 && a <= u32::MAX as i64 && b <= u32::MAX as i64)
        .ok_or_else(|| Error::InvalidParameter(format!("alpha {alpha} must be a positive small rational")))?;
    if alpha.to_f64() * (n as f64).log2() > 63.5 {
        return Err(Error::CapExceeded {
            what: "object count m = floor(n^alpha) bits",
            actual: (alpha.to_f64() * (n as f64).log2()).ceil() as u128,
            cap: 63,
        });
    }
    let root = BigUint::from(n).pow(a as u32).nth_root(b as u32);
    root.to_u64()
        .ok_or_else(|| Error::InvalidParameter("n^alpha does not fit in 64 bits".into()))
}

/// `n`, `α`, `m = ⌊n^α⌋` and `p`. When built at a threshold, `p = c n^{-η}`
/// and `eta` holds the exponent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelParams {
    pub n: u64,
    pub alpha: Rational,
    pub m: u64,
    pub c: f64,
    pub p: f64,
    pub eta: Option<Rational>,
}

impl ModelParams {
    /// `p = c n^{-η}`.
    pub fn at_threshold(n: u64, alpha: &Rational, c: f64, eta: &Rational) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("c must be positive, got {c}")));
        }
        let m = floor_power(n, alpha)?;
        let p = (c.ln() - eta.to_f64() * (n as f64).ln()).exp();
        Self::check_p(p)?;
        Ok(ModelParams {
            n,
            alpha: alpha.clone(),
            m,
            c,
            p,
            eta: Some(eta.clone()),
        })
    }

    /// Explicit `p`; `c` is recorded as `p` itself.
    pub fn with_p(n: u64, alpha: &Rational, p: f64) -> Result<Self> {
        Self::check_p(p)?;
        Ok(ModelParams {
            n,
            alpha: alpha.clone(),
            m: floor_power(n, alpha)?,
            c: p,
            p,
            eta: None,
        })
    }

    fn check_p(p: f64) -> Result<()> {
        if p > 0.0 && p <= 1.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("p must lie in (0, 1], got {p}")))
        }
    }

    pub fn mp2(&self) -> f64 {
        self.m as f64 * self.p * self.p
    }

    /// `ln` of `n^{x} p^{σ}`; uses the exact exponent when `p` came from a threshold.
    fn ln_monomial(&self, x: &Rational, sigma: usize) -> f64 {
        let ln_n = (self.n as f64).ln();
        match &self.eta {
            Some(eta) => {
                let e = x.clone() - eta.clone() * Rational::from(sigma);
                e.to_f64() * ln_n + sigma as f64 * self.c.ln()
            }
            None => x.to_f64() * ln_n + sigma as f64 * self.p.ln(),
        }
    }
}

/// `ln ψ(H₀, C, S)`. An empty `C'[S]` makes the second monomial `n^{|S|}`.
pub fn ln_psi(h0: &PatternGraph, cover: &CliqueCover, s: VertexSubset, params: &ModelParams) -> Result<f64> {
    if s.is_empty() || !s.is_subset_of(h0.vertices()) {
        return Err(Error::InvalidParameter(format!("subset {s:?} is empty or out of range")));
    }
    let st = RestrictionStats::of(cover.cliques(), s);
    let size = Rational::from(s.len());
    let first = params.ln_monomial(&(size.clone() + params.alpha.clone() * Rational::from(st.count)), st.total);
    let second = params.ln_monomial(&(size + params.alpha.clone() * Rational::from(st.count_big)), st.total_big);
    Ok(first.min(second))
}

pub fn psi(h0: &PatternGraph, cover: &CliqueCover, s: VertexSubset, params: &ModelParams) -> Result<f64> {
    ln_psi(h0, cover, s, params).map(f64::exp)
}

/// ω = min of ψ over proper nonempty subsets, with the minimising subset.
/// `None` for a pattern on fewer than two vertices.
pub fn omega(h0: &PatternGraph, cover: &CliqueCover, params: &ModelParams) -> Result<Option<(f64, VertexSubset)>> {
    let full = h0.vertices();
    let mut best: Option<(f64, VertexSubset)> = None;
    for s in VertexSubset::nonempty_subsets(h0.vertex_count()).filter(|&s| s != full) {
        let v = ln_psi(h0, cover, s, params)?;
        if best.is_none_or(|(b, _)| v < b) {
            best = Some((v, s));
        }
    }
    Ok(best.map(|(v, s)| (v.exp(), s)))
}

/// Φ = min over critical covers of ω, at `p = c n^{-η₀}`.
pub fn phi(h0: &PatternGraph, alpha: &Rational, c: f64, n: u64) -> Result<f64> {
    let e0 = eta0(h0, alpha)?;
    let params = ModelParams::at_threshold(n, alpha, c, &e0.eta0)?;
    let mut best = f64::INFINITY;
    for cover in &e0.critical {
        if let Some((v, _)) = omega(h0, cover, &params)? {
            best = best.min(v);
        }
    }
    Ok(best)
}

/// A predicted probability with any regime warnings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prediction {
    pub value: f64,
    pub ln_value: f64,
    pub warnings: Vec<String>,
}

impl Prediction {
    fn new(ln_value: f64, warnings: Vec<String>) -> Self {
        Prediction {
            value: ln_value.exp(),
            ln_value,
            warnings,
        }
    }
}

fn check_mp(m: u64, p: f64) -> Result<()> {
    if m == 0 || !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("need m >= 1 and p in (0, 1], got m={m}, p={p}")));
    }
    Ok(())
}

/// `(1 - e^{-mp})^{|I₁|} Π_{|Cᵢ| >= 2} m p^{|Cᵢ|}`; `I₁` are the singleton members.
/// Warns when `m p² >= small`.
pub fn pi_predict_with(cover: &CliqueCover, m: u64, p: f64, small: f64) -> Result<Prediction> {
    check_mp(m, p)?;
    let mf = m as f64;
    let singles = cover.cliques().iter().filter(|c| c.len() == 1).count();
    let mut ln = singles as f64 * (-(-mf * p).exp_m1()).ln();
    for c in cover.cliques().iter().filter(|c| c.len() >= 2) {
        ln += mf.ln() + c.len() as f64 * p.ln();
    }
    let mut warnings = Vec::new();
    if mf * p * p >= small {
        warnings.push(format!("m p^2 = {:.3e} is not small", mf * p * p));
    }
    Ok(Prediction::new(ln, warnings))
}

pub fn pi_predict(cover: &CliqueCover, m: u64, p: f64) -> Result<Prediction> {
    pi_predict_with(cover, m, p, MP2_SMALL)
}

/// `min{m^{|C|} p^{ΣC}, m^{|C'|} p^{ΣC'}}` with `C'` the members of size at least two.
pub fn pi_order(cover: &CliqueCover, m: u64, p: f64) -> Result<f64> {
    check_mp(m, p)?;
    let (lm, lp) = ((m as f64).ln(), p.ln());
    let all = cover.len() as f64 * lm + cover.total_size() as f64 * lp;
    let big: Vec<_> = cover.cliques().iter().filter(|c| c.len() >= 2).collect();
    let large = big.len() as f64 * lm + big.iter().map(|c| c.len()).sum::<usize>() as f64 * lp;
    Ok(all.min(large).exp())
}

/// Above-threshold form:
/// `(1 - e^{-mp²})^{|I₂|} (e^{-mp²})^{C(h,2) - |I₂|} Π_{|Cᵢ| >= 3} m p^{|Cᵢ|}`,
/// `I₂` being the members of size two. Meant for `m p²` of order one up to `log n`.
pub fn pi_predict_above(h0: &PatternGraph, cover: &CliqueCover, m: u64, p: f64) -> Result<Prediction> {
    check_mp(m, p)?;
    let h = h0.vertex_count();
    let mf = m as f64;
    let mp2 = mf * p * p;
    let pairs = cover.cliques().iter().filter(|c| c.len() == 2).count();
    let all_pairs = h * (h - 1) / 2;
    let mut ln = pairs as f64 * (-(-mp2).exp_m1()).ln() - (all_pairs - pairs) as f64 * mp2;
    for c in cover.cliques().iter().filter(|c| c.len() >= 3) {
        ln += mf.ln() + c.len() as f64 * p.ln();
    }
    let mut warnings = Vec::new();
    if mp2 < 0.1 {
        warnings.push(format!("m p^2 = {mp2:.3e} is below the intended range"));
    }
    if mp2 > 4.0 * (h.max(2) as f64).ln().max(1.0) * 10.0 {
        warnings.push(format!("m p^2 = {mp2:.3e} is far above the intended range"));
    }
    Ok(Prediction::new(ln, warnings))
}

/// Exponent checks for `p = c n^{-η₀}` and `m = ⌊n^α⌋`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegimeDiagnostics {
    pub eta0: Rational,
    /// `m p²` grows like `n` to this power.
    pub mp2_exponent: Rational,
    /// `α < 2η₀`, so `m p² → 0`.
    pub mp2_vanishes: bool,
    /// `m p² = o(n^{-2})`: the graph is asymptotically edgeless.
    pub asymptotically_edgeless: bool,
    /// `ln n = o(m p²)`: the graph is asymptotically complete.
    pub asymptotically_complete: bool,
    pub pattern_complete: bool,
    pub warnings: Vec<String>,
}

pub fn regime_check(h0: &PatternGraph, alpha: &Rational, eta0: &Rational) -> RegimeDiagnostics {
    let mp2_exponent = alpha.clone() - Rational::from(2i64) * eta0.clone();
    let mp2_vanishes = mp2_exponent.is_negative();
    let asymptotically_edgeless = mp2_exponent < Rational::from(-2i64);
    let asymptotically_complete = mp2_exponent.is_positive();
    let pattern_complete = h0.is_clique(h0.vertices());
    let mut warnings = Vec::new();
    if !mp2_vanishes {
        warnings.push(format!("alpha - 2 eta0 = {mp2_exponent} is not negative; m p^2 does not vanish"));
    }
    if asymptotically_edgeless {
        warnings.push("random graph is asymptotically edgeless at this scale".into());
    }
    if asymptotically_complete {
        warnings.push("random graph is asymptotically complete at this scale".into());
    }
    RegimeDiagnostics {
        eta0: eta0.clone(),
        mp2_exponent,
        mp2_vanishes,
        asymptotically_edgeless,
        asymptotically_complete,
        pattern_complete,
        warnings,
    }
}
