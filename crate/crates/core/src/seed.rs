//! Deterministic seed splitting.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed for a named stage.
pub fn derive(seed: u64, stage: &str) -> u64 {
    let mut h = mix(seed);
    for b in stage.bytes() {
        h = mix(h ^ b as u64);
    }
    h
}

pub fn derive_index(seed: u64, index: u64) -> u64 {
    mix(mix(seed) ^ index.wrapping_mul(0xd6e8_feb8_6659_fd93))
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform `[0, 1)` value from a hash of `(seed, u, v)`.
pub fn unit_hash(seed: u64, u: u64, v: u64) -> f64 {
    let h = mix(mix(seed ^ u.wrapping_mul(0x9e37_79b9_7f4a_7c15)) ^ v);
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
