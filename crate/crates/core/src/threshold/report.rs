//! Threshold report: critical covers, balance verdicts and λ₀.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::eta::{eta0, eta1, eta2_table, Eta2Detail};
use super::predict::{regime_check, RegimeDiagnostics};
use crate::cover::{enumerate_proper_covers, CliqueCover};
use crate::error::Result;
use crate::graph::{automorphism_count, PatternGraph, VertexSubset};
use crate::rational::Rational;

/// Largest cover family whose per-cover η₁ table is included in a report.
pub const COVER_TABLE_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BalanceVerdict {
    /// η₂(S) > η₂(V) for every proper nonempty `S`.
    StrictlyBalanced,
    /// η₂(S) < η₂(V) for some proper `S`.
    Unbalanced,
    /// Equality for some proper `S`, and no strict violation.
    Neither,
}

/// Verdict for one cover, with the subset that decides it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverBalance {
    pub cover: CliqueCover,
    pub eta2_full: Rational,
    pub verdict: BalanceVerdict,
    /// A proper subset with the smallest η₂, given when the verdict is not strict.
    pub witness: Option<VertexSubset>,
    pub witness_eta2: Option<Rational>,
}

/// Balance verdict of a single cover.
pub fn cover_balance(h0: &PatternGraph, cover: &CliqueCover, alpha: &Rational) -> Result<CoverBalance> {
    let table = eta2_table(h0, cover, alpha)?;
    let full = h0.vertices();
    let eta2_full = table
        .iter()
        .find(|d| d.subset == full)
        .and_then(|d| d.value.clone())
        .expect("η₂(V) is finite for a proper cover");
    let lowest = table
        .iter()
        .filter(|d| d.subset != full)
        .filter_map(|d| d.value.clone().map(|v| (v, d.subset)))
        .min_by(|x, y| x.0.cmp(&y.0));
    let (verdict, witness) = match lowest {
        Some((v, s)) if v < eta2_full => (BalanceVerdict::Unbalanced, Some((s, v))),
        Some((v, s)) if v == eta2_full => (BalanceVerdict::Neither, Some((s, v))),
        _ => (BalanceVerdict::StrictlyBalanced, None),
    };
    Ok(CoverBalance {
        cover: cover.clone(),
        eta2_full,
        verdict,
        witness: witness.as_ref().map(|w| w.0),
        witness_eta2: witness.map(|w| w.1),
    })
}

/// λ₀ as a polynomial in `c`: exponent ΣC mapped to its rational coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaPolynomial {
    pub terms: BTreeMap<u32, Rational>,
}

impl LambdaPolynomial {
    /// `(1/|aut|) Σ_{C ∈ critical} c^{ΣC}`.
    pub fn from_critical(critical: &[CliqueCover], aut: u64) -> Self {
        let mut counts: BTreeMap<u32, i64> = BTreeMap::new();
        for c in critical {
            *counts.entry(c.total_size() as u32).or_default() += 1;
        }
        let terms = counts
            .into_iter()
            .map(|(e, k)| (e, Rational::new(k, aut as i64)))
            .collect();
        LambdaPolynomial { terms }
    }

    /// Polynomial with the given `(exponent, coefficient)` terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, Rational)>) -> Self {
        let mut map: BTreeMap<u32, Rational> = BTreeMap::new();
        for (e, c) in terms {
            let slot = map.entry(e).or_insert_with(Rational::zero);
            *slot = slot.clone() + c;
        }
        map.retain(|_, c| !c.is_zero());
        LambdaPolynomial { terms: map }
    }

    /// Exact value at a rational `c`.
    pub fn eval_exact(&self, c: &Rational) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (&e, k)| acc + k.clone() * c.pow(e))
    }

    pub fn eval(&self, c: f64) -> f64 {
        self.terms.iter().map(|(&e, k)| k.to_f64() * c.powi(e as i32)).sum()
    }
}

impl fmt::Display for LambdaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, k)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({k})·c^{e}")?;
        }
        Ok(())
    }
}

impl Serialize for LambdaPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            exponent: u32,
            coefficient: &'a Rational,
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(&exponent, coefficient)| Term { exponent, coefficient })
            .collect();
        terms.serialize(s)
    }
}

/// One line of the per-cover table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverEta {
    pub cover: CliqueCover,
    pub eta1: Rational,
    pub critical: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdReport {
    pub order: usize,
    pub edges: usize,
    pub alpha: Rational,
    pub automorphisms: u64,
    pub eta0: Rational,
    pub critical: Vec<CliqueCover>,
    /// Every proper cover with its η₁ when the family is small enough to
    /// enumerate, otherwise only the critical covers.
    pub covers: Vec<CoverEta>,
    pub covers_truncated: bool,
    /// η₂ over every nonempty subset for each critical cover.
    pub eta2_tables: Vec<Vec<Eta2Detail>>,
    pub balance: Vec<CoverBalance>,
    pub strictly_alpha_balanced: bool,
    pub lambda0: LambdaPolynomial,
    pub regime: RegimeDiagnostics,
    pub warnings: Vec<String>,
}

impl ThresholdReport {
    pub fn lambda0(&self, c: f64) -> f64 {
        self.lambda0.eval(c)
    }
}

/// Full analysis of `h0` at `alpha`.
pub fn classify_balance(h0: &PatternGraph, alpha: &Rational) -> Result<ThresholdReport> {
    let e0 = eta0(h0, alpha)?;
    let mut warnings = Vec::new();
    let (covers, covers_truncated) = match enumerate_proper_covers(h0) {
        Ok(all) if all.len() <= COVER_TABLE_LIMIT => {
            let rows = all
                .into_iter()
                .map(|c| {
                    let v = eta1(h0, &c, alpha)?;
                    let critical = e0.critical.binary_search(&c).is_ok();
                    Ok(CoverEta { cover: c, eta1: v, critical })
                })
                .collect::<Result<Vec<_>>>()?;
            (rows, false)
        }
        Ok(_) | Err(_) => {
            warnings.push("cover family too large to tabulate; listing critical covers only".into());
            let rows = e0
                .critical
                .iter()
                .map(|c| CoverEta {
                    cover: c.clone(),
                    eta1: e0.eta0.clone(),
                    critical: true,
                })
                .collect();
            (rows, true)
        }
    };
    let eta2_tables = e0
        .critical
        .iter()
        .map(|c| eta2_table(h0, c, alpha))
        .collect::<Result<Vec<_>>>()?;
    let balance = e0
        .critical
        .iter()
        .map(|c| cover_balance(h0, c, alpha))
        .collect::<Result<Vec<_>>>()?;
    let strictly_alpha_balanced = balance.iter().all(|b| b.verdict == BalanceVerdict::StrictlyBalanced);
    let aut = automorphism_count(h0);
    let lambda0 = LambdaPolynomial::from_critical(&e0.critical, aut);
    let regime = regime_check(h0, alpha, &e0.eta0);
    warnings.extend(regime.warnings.iter().cloned());
    if !strictly_alpha_balanced {
        warnings.push("pattern is not strictly alpha-balanced; no Poisson limit is asserted".into());
    }
    Ok(ThresholdReport {
        order: h0.vertex_count(),
        edges: h0.edge_count(),
        alpha: alpha.clone(),
        automorphisms: aut,
        eta0: e0.eta0,
        critical: e0.critical,
        covers,
        covers_truncated,
        eta2_tables,
        balance,
        strictly_alpha_balanced,
        lambda0,
        regime,
        warnings,
    })
}

/// λ₀(c) for `h0` at `alpha`.
pub fn lambda0(h0: &PatternGraph, alpha: &Rational, c: f64) -> Result<f64> {
    let e0 = eta0(h0, alpha)?;
    Ok(LambdaPolynomial::from_critical(&e0.critical, automorphism_count(h0)).eval(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn lambda_examples() {
        let k3 = PatternGraph::complete(3).unwrap();
        let rep = classify_balance(&k3, &r(3, 1)).unwrap();
        let want = LambdaPolynomial::from_terms([(3, r(1, 6)), (6, r(1, 6))]);
        assert_eq!(rep.lambda0, want);
        assert_eq!(rep.covers.len(), 9);
        assert!(!rep.covers_truncated);
        let c4 = PatternGraph::cycle(4).unwrap();
        let rep = classify_balance(&c4, &r(1, 1)).unwrap();
        assert_eq!(rep.lambda0, LambdaPolynomial::from_terms([(8, r(1, 8))]));
        assert!((rep.lambda0(1.0) - 0.125).abs() < 1e-15);
        let k23 = PatternGraph::complete_bipartite(2, 3).unwrap();
        let rep = classify_balance(&k23, &r(1, 2)).unwrap();
        assert_eq!(rep.lambda0, LambdaPolynomial::from_terms([(12, r(1, 12))]));
    }

    #[test]
    fn balance_examples() {
        for h in 3..=5 {
            let kh = PatternGraph::complete(h).unwrap();
            let hh = h as i64;
            for alpha in [r(1, 1), r(2 * hh, hh - 1), r(4 * hh, hh - 1)] {
                assert!(classify_balance(&kh, &alpha).unwrap().strictly_alpha_balanced);
            }
        }
        for t in 4..=6 {
            let ct = PatternGraph::cycle(t).unwrap();
            for alpha in [r(1, 10), r(1, 1), r(5, 1)] {
                assert!(classify_balance(&ct, &alpha).unwrap().strictly_alpha_balanced);
            }
        }
        let k23 = PatternGraph::complete_bipartite(2, 3).unwrap();
        let rep = classify_balance(&k23, &r(1, 12)).unwrap();
        assert!(!rep.strictly_alpha_balanced);
        let b = &rep.balance[0];
        assert_eq!(b.verdict, BalanceVerdict::Unbalanced);
        assert!(b.witness_eta2.clone().unwrap() < b.eta2_full);
    }

    #[test]
    fn lambda_display() {
        let p = LambdaPolynomial::from_terms([(3, r(1, 6)), (6, r(1, 6))]);
        assert_eq!(p.to_string(), "(1/6)·c^3 + (1/6)·c^6");
    }
}
