//! Exact homomorphism densities, dependent random choice and Sidorenko-type
//! inequalities for small bipartite patterns.

pub mod bitset;
pub mod drc;
pub mod enumerate;
pub mod error;
pub mod exact;
pub mod forcing;
pub mod generators;
pub mod graph;
pub mod homcount;
pub mod inequality;
pub mod io;
pub mod pattern;
pub mod ramsey;

pub use bitset::VertexSet;
pub use drc::{
    constructive_bound, drc_classify, drc_verify, hyper_embed_count, DrcParams, DrcReport,
    Hypergraph,
};
pub use error::{Error, Result};
pub use exact::{Density, ExactValue, HomCount};
pub use forcing::{degree_concentration, forcing_experiment, quasirandom_battery, Tolerances};
pub use generators::{generate, shorthand, GenSpec, Prob};
pub use graph::{Graph, VertexSequence, DEFAULT_VERTEX_BUDGET};
pub use homcount::{density, hom_count, injective_density, CountConfig, Counter, Kernel};
pub use inequality::{
    correlation_check, correlation_search, sidorenko_report, tensor_power_check, Host,
};
pub use pattern::{CompleteSide, PatternGraph, Side};
pub use ramsey::{mono_density, multiplicity_scan, Coloring};
