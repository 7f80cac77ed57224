//! Deterministic random streams.
//!
//! Every random draw in the crate comes from a ChaCha8 generator keyed by a
//! root seed, a domain tag, and a payload (trial index, subset encoding, ...),
//! so that results are reproducible and independent of scheduling: stream
//! `(seed, domain, payload)` always yields the same sequence no matter which
//! worker evaluates it or in which order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Domain tags, one per independent consumer of randomness.
pub mod domain {
    /// Monte Carlo trial streams; payload = [trial index].
    pub const MC_TRIAL: u64 = 0x4d43_5452;
    /// Planted violator sets of the random consistent space; payload = the
    /// candidate basis encoded as a mask.
    pub const PLANTED_SET: u64 = 0x504c_414e;
    /// Sampled-mode structural checks; payload = [trial index].
    pub const CHECK: u64 = 0x4348_4b53;
    /// Random removal rule; payload = [sample encoding hash].
    pub const REMOVAL: u64 = 0x524d_4b52;
    /// Instance generation (`vlab gen`).
    pub const GEN: u64 = 0x47454e00;
    /// Fixed shuffle inside the miniball solver.
    pub const SHUFFLE: u64 = 0x53485546;
}

/// splitmix64 finalizer; good avalanche, cheap enough to key a generator per
/// candidate set.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a generator for `(seed, domain, payload)`. The 256-bit ChaCha key
/// is filled from a splitmix64 chain over the inputs.
pub fn rng_for(seed: u64, domain: u64, payload: &[u64]) -> ChaCha8Rng {
    let mut state = mix(seed ^ mix(domain));
    for &w in payload {
        state = mix(state ^ mix(w));
    }
    let mut key = [0u8; 32];
    let mut word = state;
    for chunk in key.chunks_exact_mut(8) {
        word = mix(word);
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
