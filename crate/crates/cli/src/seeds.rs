//! Deterministic per-sample seed derivation.
//!
//! Survey and verify runs fan samples out to parallel workers; every sample
//! must be reproducible in isolation and independent of worker count, so its
//! seed is a pure function of the base seed and the sample index.

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable 64-bit hash of `(base_seed, sample_index)`.
pub fn sample_seed(base: u64, index: u64) -> u64 {
    splitmix64(base ^ splitmix64(index))
}
