//! Seed derivation for reproducible experiments.
//!
//! Every randomized routine takes a `u64` seed and builds a ChaCha stream from
//! it. Batches derive one seed per trial with [`trial_seed`], so a trial can be
//! replayed in isolation and results do not depend on scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic generator used throughout the crate.
pub type Rng = ChaCha8Rng;

/// Build the generator for `seed`.
pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// splitmix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` under `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// Seed for a named sub-stream (e.g. one pipeline phase) of `master`.
pub fn stream_seed(master: u64, label: &str) -> u64 {
    let mut h = mix64(master);
    for b in label.bytes() {
        h = mix64(h ^ u64::from(b));
    }
    h
}
