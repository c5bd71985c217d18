//! Portable seeded randomness. Every random choice in the crate goes
//! through these helpers so that a seed fixes the result on any platform.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in `[0, 1)` with 53 random bits.
pub fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Index in `0..len` by multiply-shift; bias is below `len / 2^64`.
pub fn index(rng: &mut ChaCha8Rng, len: usize) -> usize {
    debug_assert!(len > 0);
    ((u128::from(rng.next_u64()) * len as u128) >> 64) as usize
}
