//! Test support: brute-force oracles and seeded generators.

pub mod generate;
pub mod oracle;

use rand::SeedableRng;

pub use generate::{dense_graph, query_text, random_query, schema_instance, turtle_graph, SchemaLimits};
pub use oracle::{closure_oracle, match_oracle, naive_fixpoint, query_oracle, rules_oracle};

/// Deterministic generator for test case `case` of a suite seeded by `seed`.
pub fn rng(seed: u64, case: u64) -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ case)
}
