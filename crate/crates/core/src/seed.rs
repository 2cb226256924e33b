//! Deterministic RNG substreams.
//!
//! Every randomized operation in this crate takes an explicit seed, and
//! experiment code derives one independent substream per (curve, grid point,
//! trial). Derivation is a SplitMix64 fold over the master seed and a path of
//! context words, so trial `t` of curve `c` always sees the same stream no
//! matter how many workers run or in which order trials complete.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One step of the SplitMix64 generator (public-domain constants).
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed from a master seed and a path of context words.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut state = master ^ 0x6a09_e667_f3bc_c909;
    let mut out = splitmix64(&mut state);
    for &word in path {
        state ^= word;
        out = splitmix64(&mut state);
    }
    out
}

/// Stable 64-bit hash of a label (FNV-1a), for seeding per-curve streams.
pub fn hash_label(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Deterministic RNG for the substream identified by `path` under `master`.
///
/// The full 256-bit ChaCha key is filled from successive SplitMix64 outputs,
/// so substreams with different paths are statistically independent.
pub fn substream(master: u64, path: &[u64]) -> ChaCha8Rng {
    let mut state = derive_seed(master, path);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
