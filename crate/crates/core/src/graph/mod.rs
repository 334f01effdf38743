//! Small pattern graphs, host graphs and induced-copy counting.

pub mod balance;
pub mod embed;
pub mod host;
pub mod io;
pub mod pattern;

pub use balance::{is_strictly_balanced, kappa};
pub use embed::{
    automorphism_count, automorphisms, count_induced_copies, count_labelled_embeddings,
    count_pattern_copies, count_pattern_copies_f64, for_each_induced_embedding, list_induced_copies,
    InducedCopy,
};
pub use host::HostGraph;
pub use pattern::{pair_index, PatternGraph, VertexSubset, DEFAULT_PATTERN_CAP, MAX_PATTERN_ORDER};
