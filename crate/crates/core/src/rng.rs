//! Deterministic RNG stream derivation.
//!
//! Every independent unit of randomness (a walk, a pass shuffle, a training
//! worker) gets its own ChaCha stream keyed by the master seed plus a tuple of
//! coordinates, so results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds `parts` into `master` to produce a well-separated child seed.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix(master), |acc, &p| mix(acc ^ mix(p)))
}

pub fn stream(master: u64, parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, parts))
}

// Domain tags keep streams for different purposes apart.
pub const TAG_WALK: u64 = 1;
pub const TAG_SHUFFLE: u64 = 2;
pub const TAG_SGNS: u64 = 3;
pub const TAG_INIT: u64 = 4;
pub const TAG_SPLIT: u64 = 5;
pub const TAG_EVAL: u64 = 6;
