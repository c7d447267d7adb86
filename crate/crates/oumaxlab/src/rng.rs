//! Deterministic stream seeding for replica-parallel Monte Carlo.
//!
//! Replica `i` of a run with master seed `s` draws from a ChaCha8 generator
//! seeded with `mix_seed(s, i)`. The mixing function is the SplitMix64
//! finalizer applied to `s + (i+1)*GAMMA`. It is frozen: two invocations
//! with the same master seed and disjoint replica index ranges produce the
//! exact same per-replica streams, which is what makes run merging valid.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer over (master, index). Frozen contract.
pub fn mix_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The generator for one replica substream.
pub fn replica_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(master, index))
}
