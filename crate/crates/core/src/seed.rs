//! Stable seed derivation.
//!
//! Every random draw in the crate is keyed by a tuple of integers (global seed,
//! window, draw index, joint, ...). Keys are folded with SplitMix64 so results do
//! not depend on evaluation order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds an ordered list of key parts into one 64-bit seed.
pub fn key(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(0x5EED_0000_0000_0001u64, |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// FNV-1a over the UTF-8 bytes; stable across platforms and toolchains.
pub fn hash_str(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Uniform draw in `[0, 1)` determined entirely by `key`.
#[inline]
pub fn unit_f64(key: u64) -> f64 {
    (splitmix64(key) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn rng(key: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(key)
}
