//! Splittable, counter-based random streams.
//!
//! Every sampler in this crate takes an explicit [`Stream`] derived from
//! `(master seed, module tag, trial index)`. Streams with distinct
//! coordinates are statistically independent, and a stream's output depends
//! only on its coordinates, never on scheduling. This is what makes the
//! Monte Carlo runs bit-reproducible at any worker count: trial `i` draws
//! the same bytes whether it runs first on one thread or last on eight.
//!
//! Derivation: the three coordinates are mixed by SplitMix64 into a 256-bit
//! ChaCha8 key. ChaCha is itself a counter-mode generator, so a `Stream` is
//! cheap to construct per trial.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A value-like random stream handle. `Clone` restarts the stream.
pub type Stream = ChaCha8Rng;

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// FNV-1a over the tag bytes; gives the module tag a stable 64-bit identity.
fn tag_hash(tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Derive the stream for `(master, tag, trial)`.
pub fn stream(master: u64, tag: &str, trial: u64) -> Stream {
    let mut state = master ^ tag_hash(tag).rotate_left(17) ^ trial.wrapping_mul(0xa24b_aed4_963e_e407);
    // Decorrelate the three coordinates before key expansion.
    let mut key = [0u8; 32];
    let mut st2 = splitmix64(&mut state) ^ trial;
    let mut st3 = splitmix64(&mut st2) ^ tag_hash(tag);
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut st3).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Convenience: a fresh random master seed from the OS, for CLI default.
pub fn random_master_seed() -> u64 {
    rand::rngs::OsRng.next_u64()
}
