//! Fixed workloads shared by the criterion benches.

use degenkit_core::random::{random_model, rng};
use degenkit_core::snc::{ngon_model, SncModel};

/// Seeded random models, the same set on every run.
pub fn random_models(count: u64, max_components: u32) -> Vec<SncModel> {
    (0..count)
        .map(|s| random_model(&mut rng(s), max_components))
        .collect()
}

pub fn ngons(sizes: &[u32]) -> Vec<SncModel> {
    sizes.iter().map(|&n| ngon_model(n)).collect()
}
