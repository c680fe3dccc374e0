//! Toy instances of the attacked constructions over seeded public permutations.
//!
//! Every instance evaluates a total deterministic function on machine words
//! and knows its own secret state, so downstream code can compare attack
//! output with ground truth. Public material (permutations, linear maps,
//! PolyMAC fixed blocks) is derived from `perm_seed`; secret keys come from
//! `key_seed`.

mod instance;
mod permutation;
mod variant;

pub use instance::{
    CipherInstance, InstanceBuilder, InstanceDescriptor, SecretState, TppMaps, TruncationGuard,
    DESCRIPTOR_SCHEMA_VERSION,
};
pub use permutation::Permutation;
pub use variant::Variant;
