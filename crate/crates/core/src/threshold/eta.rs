//! The exponents η₂ (per cover and subset), η₁ (per cover) and η₀ (per pattern).

use std::cmp::Ordering;

use serde::Serialize;

use crate::cover::restrict::RestrictionStats;
use crate::cover::{clique_edge_mask, enumerate_cliques, CliqueCover};
use crate::error::{Error, Result};
use crate::graph::{PatternGraph, VertexSubset, DEFAULT_PATTERN_CAP};
use crate::rational::Rational;

/// Search nodes allowed in the η₀ branch and bound before refusing.
pub const ETA0_NODE_BUDGET: u64 = 50_000_000;

/// `α = a/b` with both parts small enough that every cross product below fits
/// in an `i128`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Alpha {
    pub a: i128,
    pub b: i128,
}

impl Alpha {
    pub fn new(alpha: &Rational) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        match alpha.to_i64_parts() {
            Some((a, b)) if a < 1 << 31 && b < 1 << 31 => Ok(Alpha {
                a: a as i128,
                b: b as i128,
            }),
            _ => Err(Error::InvalidParameter(format!(
                "alpha {alpha} has numerator or denominator of 2^31 or more"
            ))),
        }
    }
}

/// Nonnegative fraction with a positive denominator.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Frac {
    pub num: i128,
    pub den: i128,
}

impl Frac {
    /// `(|S| + α k) / σ`
    fn eta(alpha: Alpha, s_len: usize, k: usize, sigma: usize) -> Frac {
        Frac {
            num: s_len as i128 * alpha.b + alpha.a * k as i128,
            den: alpha.b * sigma as i128,
        }
    }

    fn to_rational(self) -> Rational {
        let (n, d) = (self.num, self.den);
        let g = gcd(n, d);
        Rational::new((n / g) as i64, (d / g) as i64)
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs().max(1)
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Frac {}
impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Frac {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

/// Which formula produced an η₂ value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Eta2Branch {
    /// `(|S| + α|C[S]|) / ΣC[S]`
    AllRestrictions,
    /// `(|S| + α|C'[S]|) / ΣC'[S]`
    LargeRestrictions,
    /// No cover clique meets `S`; the exponent is unbounded.
    Unbounded,
}

/// One row of the η₂ table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eta2Detail {
    pub subset: VertexSubset,
    /// `None` stands for +∞.
    pub value: Option<Rational>,
    pub branch: Eta2Branch,
    /// `α` sits exactly on `|S| / (ΣC[S] - |C[S]|)`.
    pub on_boundary: bool,
}

/// Fast η₂ for the stats of one subset. Equals the smaller of the two
/// formulas: the first is a mediant of the second and `α`, so the branch
/// condition picks whichever is lower.
pub(crate) fn eta2_frac(alpha: Alpha, s_len: usize, st: RestrictionStats) -> Option<Frac> {
    if st.count == 0 {
        return None;
    }
    let all = Frac::eta(alpha, s_len, st.count, st.total);
    if st.count_big == 0 {
        return Some(all);
    }
    Some(all.min(Frac::eta(alpha, s_len, st.count_big, st.total_big)))
}

fn check_cover(h0: &PatternGraph, cover: &CliqueCover) -> Result<()> {
    cover
        .check(h0)
        .map_err(|v| Error::InvalidParameter(format!("not a proper clique cover: {v:?}")))
}

/// η₂ with the branch taken as written: the first formula when
/// `α < |S|/(ΣC[S] - |C[S]|)` or `ΣC[S] = |C[S]|`, the second otherwise.
pub fn eta2_detail(h0: &PatternGraph, cover: &CliqueCover, s: VertexSubset, alpha: &Rational) -> Result<Eta2Detail> {
    check_cover(h0, cover)?;
    if s.is_empty() || !s.is_subset_of(h0.vertices()) {
        return Err(Error::InvalidParameter(format!("subset {s:?} is empty or out of range")));
    }
    let ap = Alpha::new(alpha)?;
    let st = RestrictionStats::of(cover.cliques(), s);
    let detail = if st.count == 0 {
        Eta2Detail {
            subset: s,
            value: None,
            branch: Eta2Branch::Unbounded,
            on_boundary: false,
        }
    } else {
        let excess = (st.total - st.count) as i128;
        // α < |S| / excess  <=>  a·excess < |S|·b
        let lhs = ap.a * excess;
        let rhs = s.len() as i128 * ap.b;
        let on_boundary = excess > 0 && lhs == rhs;
        if excess == 0 || lhs < rhs {
            Eta2Detail {
                subset: s,
                value: Some(Frac::eta(ap, s.len(), st.count, st.total).to_rational()),
                branch: Eta2Branch::AllRestrictions,
                on_boundary,
            }
        } else {
            assert!(st.count_big > 0, "excess without a restriction of size two");
            Eta2Detail {
                subset: s,
                value: Some(Frac::eta(ap, s.len(), st.count_big, st.total_big).to_rational()),
                branch: Eta2Branch::LargeRestrictions,
                on_boundary,
            }
        }
    };
    debug_assert_eq!(
        detail.value,
        eta2_frac(ap, s.len(), st).map(Frac::to_rational),
        "branch rule and minimum disagree"
    );
    Ok(detail)
}

/// η₂(H₀, C, S, α); `None` means +∞ (no clique of `C` meets `S`).
pub fn eta2(h0: &PatternGraph, cover: &CliqueCover, s: VertexSubset, alpha: &Rational) -> Result<Option<Rational>> {
    eta2_detail(h0, cover, s, alpha).map(|d| d.value)
}

/// Full η₂ table over every nonempty subset, in increasing bitmask order.
pub fn eta2_table(h0: &PatternGraph, cover: &CliqueCover, alpha: &Rational) -> Result<Vec<Eta2Detail>> {
    VertexSubset::nonempty_subsets(h0.vertex_count())
        .map(|s| eta2_detail(h0, cover, s, alpha))
        .collect()
}

/// Minimum of η₂ over nonempty subsets, stopping early once it drops below `floor`.
pub(crate) fn eta1_frac(h: usize, cliques: &[VertexSubset], alpha: Alpha, floor: Option<Frac>) -> Option<Frac> {
    let mut best: Option<Frac> = None;
    for s in VertexSubset::nonempty_subsets(h) {
        if let Some(v) = eta2_frac(alpha, s.len(), RestrictionStats::of(cliques, s)) {
            if best.is_none_or(|b| v < b) {
                best = Some(v);
                if floor.is_some_and(|f| v < f) {
                    return best;
                }
            }
        }
    }
    best
}

/// η₁(H₀, C, α) = min over nonempty `S` of η₂.
pub fn eta1(h0: &PatternGraph, cover: &CliqueCover, alpha: &Rational) -> Result<Rational> {
    check_cover(h0, cover)?;
    let ap = Alpha::new(alpha)?;
    let v = eta1_frac(h0.vertex_count(), cover.cliques(), ap, None).expect("a proper cover meets V");
    Ok(v.to_rational())
}

/// η₀ and the covers attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eta0 {
    pub eta0: Rational,
    /// Critical covers, sorted.
    pub critical: Vec<CliqueCover>,
    /// Branch-and-bound nodes visited.
    pub nodes: u64,
}

/// η₀ = max over proper covers of η₁, with the argmax set.
pub fn eta0(h0: &PatternGraph, alpha: &Rational) -> Result<Eta0> {
    eta0_with(h0, alpha, DEFAULT_PATTERN_CAP, ETA0_NODE_BUDGET)
}

/// [`eta0`] with an explicit order cap and search budget.
///
/// Walks include/exclude decisions over all cliques, larger cliques first.
/// Adding cliques `A` to a partial family moves `η₂(V)` to a mediant of its
/// current value and `α|A|/ΣA <= α/min|C|`, so a branch whose bound falls
/// strictly below the best η₁ found so far cannot hold a critical cover.
/// Ties are kept. Redundant covers are searched too: η₁ is not monotone under
/// adding cliques.
pub fn eta0_with(h0: &PatternGraph, alpha: &Rational, cap: usize, budget: u64) -> Result<Eta0> {
    h0.check_cap(cap)?;
    let ap = Alpha::new(alpha)?;
    let h = h0.vertex_count();
    let mut cliques = enumerate_cliques(h0);
    cliques.sort_by(|x, y| y.len().cmp(&x.len()).then(crate::cover::lex_cmp(*x, *y)));
    let masks: Vec<u128> = cliques.iter().map(|&c| clique_edge_mask(c)).collect();
    let q = cliques.len();
    let mut suffix_or = vec![0u128; q + 1];
    let mut suffix_min = vec![usize::MAX; q + 1];
    for i in (0..q).rev() {
        suffix_or[i] = suffix_or[i + 1] | masks[i];
        suffix_min[i] = suffix_min[i + 1].min(cliques[i].len());
    }

    // Seed the bound with covers that always exist.
    let edges: Vec<VertexSubset> = h0.edges().into_iter().map(|(u, v)| VertexSubset::from_vertices([u, v])).collect();
    let mut seed = eta1_frac(h, &edges, ap, None).expect("edge cover meets V");
    let maximal: Vec<VertexSubset> = cliques
        .iter()
        .copied()
        .filter(|&c| !cliques.iter().any(|&d| d != c && c.is_subset_of(d)))
        .collect();
    seed = seed.max(eta1_frac(h, &maximal, ap, None).expect("maximal cliques meet V"));

    let mut search = Search {
        h,
        alpha: ap,
        cliques: &cliques,
        masks: &masks,
        suffix_or: &suffix_or,
        suffix_min: &suffix_min,
        target: h0.edge_mask(),
        best: seed,
        critical: Vec::new(),
        chosen: Vec::new(),
        nodes: 0,
        budget,
    };
    search.dfs(0, 0, 0, 0)?;
    let best = search.best;
    let nodes = search.nodes;
    let mut critical: Vec<CliqueCover> = search.critical.into_iter().map(CliqueCover::new).collect();
    critical.sort();
    if critical.is_empty() {
        return Err(Error::Consistency("branch and bound lost every cover".into()));
    }
    Ok(Eta0 {
        eta0: best.to_rational(),
        critical,
        nodes,
    })
}

struct Search<'a> {
    h: usize,
    alpha: Alpha,
    cliques: &'a [VertexSubset],
    masks: &'a [u128],
    suffix_or: &'a [u128],
    suffix_min: &'a [usize],
    target: u128,
    best: Frac,
    critical: Vec<Vec<VertexSubset>>,
    chosen: Vec<VertexSubset>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn dfs(&mut self, i: usize, covered: u128, t: usize, sigma: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                detail: format!("eta0 search exceeded {} nodes", self.budget),
            });
        }
        if covered | self.suffix_or[i] != self.target {
            return Ok(());
        }
        if t > 0 {
            let current = Frac::eta(self.alpha, self.h, t, sigma);
            let bound = if i < self.cliques.len() {
                let tail = Frac {
                    num: self.alpha.a,
                    den: self.alpha.b * self.suffix_min[i] as i128,
                };
                current.max(tail)
            } else {
                current
            };
            if bound < self.best {
                return Ok(());
            }
        }
        if i == self.cliques.len() {
            self.leaf();
            return Ok(());
        }
        self.chosen.push(self.cliques[i]);
        let r = self.dfs(i + 1, covered | self.masks[i], t + 1, sigma + self.cliques[i].len());
        self.chosen.pop();
        r?;
        self.dfs(i + 1, covered, t, sigma)
    }

    fn leaf(&mut self) {
        let Some(v) = eta1_frac(self.h, &self.chosen, self.alpha, Some(self.best)) else {
            return;
        };
        match v.cmp(&self.best) {
            Ordering::Less => {}
            Ordering::Equal => self.critical.push(self.chosen.clone()),
            Ordering::Greater => {
                self.best = v;
                self.critical.clear();
                self.critical.push(self.chosen.clone());
            }
        }
    }
}
