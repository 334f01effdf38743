//! The cover that induced each copy of a pattern in a sampled graph, and the
//! resulting split `X = Y0 + Y1` into critical and non-critical covers.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cover::CliqueCover;
use crate::error::{Error, Result};
use crate::graph::{automorphisms, list_induced_copies, HostGraph, PatternGraph, VertexSubset};
use crate::sampler::{project_graph, IncidenceSample, VertexIndex};
use crate::threshold::ThresholdReport;

/// The unique cover inducing the copy `embedding` (pattern vertex `i` sits at
/// host vertex `embedding[i]`): the distinct traces of chooser sets on the
/// copy with at least two vertices, pulled back to pattern labels.
pub fn witness_cover(
    sample: &IncidenceSample,
    index: &VertexIndex,
    host: &HostGraph,
    h0: &PatternGraph,
    embedding: &[u32],
) -> Result<CliqueCover> {
    let h = h0.vertex_count();
    if embedding.len() != h {
        return Err(Error::InvalidParameter(format!("embedding has {} vertices, pattern has {h}", embedding.len())));
    }
    for i in 0..h {
        for j in i + 1..h {
            let (a, b) = (embedding[i] as usize, embedding[j] as usize);
            if a == b || a >= sample.n || b >= sample.n || h0.has_edge(i, j) != host.has_edge(a, b) {
                return Err(Error::InvalidParameter(format!(
                    "host vertices {embedding:?} are not an induced copy"
                )));
            }
        }
    }
    let mut traces: Vec<(u32, usize)> = embedding
        .iter()
        .enumerate()
        .flat_map(|(i, &v)| index.objects(v as usize).iter().map(move |&w| (w, i)))
        .collect();
    traces.sort_unstable();
    let mut cliques = Vec::new();
    let mut k = 0;
    while k < traces.len() {
        let w = traces[k].0;
        let mut mask = VertexSubset::EMPTY;
        while k < traces.len() && traces[k].0 == w {
            mask = mask.union(VertexSubset::singleton(traces[k].1));
            k += 1;
        }
        if mask.len() >= 2 {
            cliques.push(mask);
        }
    }
    let cover = CliqueCover::new(cliques);
    cover
        .check(h0)
        .map_err(|v| Error::Consistency(format!("witness {cover:?} is not a proper cover: {v:?}")))?;
    Ok(cover)
}

/// Copies per canonical cover orbit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoverCounts {
    pub orbits: BTreeMap<CliqueCover, OrbitCount>,
    pub x: u64,
    pub y0: u64,
    pub y1: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OrbitCount {
    pub count: u64,
    pub critical: bool,
}

impl CoverCounts {
    pub fn merge(&mut self, other: &CoverCounts) {
        for (cover, oc) in &other.orbits {
            let slot = self.orbits.entry(cover.clone()).or_insert(OrbitCount {
                count: 0,
                critical: oc.critical,
            });
            slot.count += oc.count;
        }
        self.x += other.x;
        self.y0 += other.y0;
        self.y1 += other.y1;
    }
}

impl Serialize for CoverCounts {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row<'a> {
            cover: &'a CliqueCover,
            count: u64,
            critical: bool,
        }
        #[derive(Serialize)]
        struct Out<'a> {
            x: u64,
            y0: u64,
            y1: u64,
            orbits: Vec<Row<'a>>,
        }
        Out {
            x: self.x,
            y0: self.y0,
            y1: self.y1,
            orbits: self
                .orbits
                .iter()
                .map(|(cover, oc)| Row {
                    cover,
                    count: oc.count,
                    critical: oc.critical,
                })
                .collect(),
        }
        .serialize(s)
    }
}

/// Witnesses every induced copy in the projection of `sample`. `critical`
/// must be the sorted critical cover set of `h0`; it is closed under
/// automorphisms, so testing the labelled witness is enough.
pub fn per_cover_counts_with(sample: &IncidenceSample, h0: &PatternGraph, critical: &[CliqueCover]) -> Result<CoverCounts> {
    let host = project_graph(sample);
    let index = sample.vertex_index();
    let auts = automorphisms(h0);
    let mut counts = CoverCounts::default();
    for copy in list_induced_copies(&host, h0) {
        let cover = witness_cover(sample, &index, &host, h0, &copy.embedding)?;
        let is_critical = critical.binary_search(&cover).is_ok();
        let slot = counts.orbits.entry(cover.canonical_orbit(&auts)).or_insert(OrbitCount {
            count: 0,
            critical: is_critical,
        });
        if slot.critical != is_critical {
            return Err(Error::Consistency("critical set is not closed under automorphisms".into()));
        }
        slot.count += 1;
        counts.x += 1;
        if is_critical {
            counts.y0 += 1;
        } else {
            counts.y1 += 1;
        }
    }
    Ok(counts)
}

pub fn per_cover_counts(sample: &IncidenceSample, h0: &PatternGraph, report: &ThresholdReport) -> Result<CoverCounts> {
    per_cover_counts_with(sample, h0, &report.critical)
}
