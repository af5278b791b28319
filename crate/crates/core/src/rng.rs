//! Seed derivation and per-row random streams.
//!
//! Every random draw in the crate is addressed by a tuple of indices mixed
//! into a master seed, so results never depend on evaluation order or on
//! how work is split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a master seed and a path of indices.
///
/// The mapping is fixed: changing it changes every published sweep.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix64(master ^ GOLDEN), |acc, &p| {
        mix64(acc.wrapping_add(GOLDEN).wrapping_add(mix64(p)))
    })
}

/// Independent stream for row `row` under `seed`.
pub fn row_stream(seed: u64, row: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(row);
    rng
}
