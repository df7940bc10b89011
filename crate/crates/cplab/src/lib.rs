//! Random Catalan-pair graphs as a laboratory.
//!
//! A Catalan-pair graph is the interlacement graph of two non-crossing
//! perfect matchings sharing `2n` collinear points: color the points, place
//! one matching above the red points and one below the blue points, make a
//! vertex per arc, and join two arcs whenever their endpoints alternate.
//! These are exactly the bipartite circle graphs.
//!
//! This crate provides:
//!
//! * exact Catalan arithmetic and exact arc-containment probabilities for a
//!   uniform matching ([`catalan`]),
//! * matchings, balanced-word codecs, and brute-force enumeration
//!   ([`matching`]),
//! * exactly-uniform samplers for matchings and whole colored
//!   representatives, with reproducible parallel RNG streams ([`sampler`]),
//! * interlacement-graph construction and per-graph statistics ([`graph`]),
//! * subgraph/induced-subgraph counting, quadruple predicates, and summary
//!   statistics ([`analysis`]),
//! * an exhaustive small-size oracle for the full model ([`oracle`]),
//! * a seeded experiment harness with CSV/JSON output ([`experiment`]).
//!
//! The `examples/` directory has one runnable program per capability; the
//! `cplab` binary exposes the same functionality as subcommands.

pub mod analysis;
pub mod catalan;
pub mod experiment;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod sampler;

pub use analysis::{
    count_good_pairs, count_pattern, summarize, PatternGraph, Quadruple, QuadrupleProfile,
    SummaryStats,
};
pub use catalan::{
    catalan, catalan_asymptotic, gamma_bounds, gamma_term, GammaPartialSum, GapProfile, ValidPair,
};
pub use experiment::{run_experiment, ExperimentSpec, MetricSet, RunRecord};
pub use graph::{
    arc_span_counts, build_graph, components, degree_histogram, isolated_stats, CatalanPairGraph,
    Side,
};
pub use matching::{
    decode_balanced, encode_balanced, enumerate_matchings, is_noncrossing, BalancedWord, Matching,
};
pub use oracle::{exact_model_expectations, exact_pair_probability, is_valid_quadruple_small};
pub use sampler::{
    sample_coloring, sample_matching, sample_representative, Color, ColoredRepresentative,
    ColoringModel, RngStream,
};

#[cfg(test)]
pub(crate) mod test_support;
