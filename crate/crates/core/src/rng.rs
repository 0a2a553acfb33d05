// SPDX-License-Identifier: MIT OR Apache-2.0

//! Keyed random substreams.
//!
//! Every stochastic step derives its generator from a key tuple rather than
//! from shared mutable state, so serial and parallel execution see the same
//! numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags separating unrelated uses of one user seed.
pub mod purpose {
    pub const IMPUTATION: u64 = 0x696d_7075;
    pub const NOISE: u64 = 0x6e6f_6973;
    pub const MASK: u64 = 0x6d61_736b;
    pub const ALGORITHM: u64 = 0x616c_676f;
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds a key tuple into a single 64-bit seed.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(mix64(seed), |acc, &p| mix64(acc ^ mix64(p)))
}

/// Generator for `(seed, purpose, major)` with ChaCha stream `minor`.
pub fn substream(seed: u64, purpose: u64, major: u64, minor: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[purpose, major]));
    rng.set_stream(minor);
    rng
}
