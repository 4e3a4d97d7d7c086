//! Shared inputs for the benchmarks.

use diskdiag::corpus::{generate, CorpusOptions, OrderKind};
use diskdiag::PoGraph;

/// Deterministic Δ-graphs of roughly `max_vertices` vertices.
pub fn sample_graphs(count: usize, max_vertices: usize) -> Vec<PoGraph> {
    let opts = CorpusOptions { max_vertices, ..CorpusOptions::default() };
    (0..count as u64).map(|s| generate(s, OrderKind::Minimal, opts).graph).collect()
}
