//! Shared fixtures for the benchmarks.

use homdens::generators::{generate, GenSpec, Prob};
use homdens::Graph;

/// Seeded `G(n, 1/2)`.
pub fn half(n: usize, seed: u64) -> Graph {
    generate(&GenSpec::gnp(n, Prob::new(1, 2).expect("valid"), seed)).expect("valid spec")
}
