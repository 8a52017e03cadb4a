//! Deterministic RNG stream derivation.
//!
//! Every random quantity in the crate draws from a stream addressed by a
//! master seed plus a path of counter words (for example `[DATA, cell, rep]`
//! or `[BOOT, replicate]`). Streams depend only on their address, never on
//! scheduling, so parallel and sequential runs consume identical randomness.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tag: data-generating draws in the simulation harness.
pub const STREAM_DATA: u64 = 0x01;
/// Stream tag: bootstrap multiplier draws.
pub const STREAM_BOOT: u64 = 0x02;

/// splitmix64 step; the standard 64-bit finalizer-based generator.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Collapse `master` and a path of counter words into one seed word.
///
/// Each path word is avalanche-mixed before entering the chain; absorbing raw
/// counters would let small words at adjacent positions cancel (the low bits
/// of `(s ^ c) + gamma` track `c` when no carry intervenes, so a later word
/// equal to `c1 ^ c2` could collide two paths). Mixed words make cancellation
/// a 64-bit coincidence.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut state = master;
    let mut out = splitmix64(&mut state);
    for &word in path {
        let mut w = word;
        state ^= splitmix64(&mut w);
        out = splitmix64(&mut state);
    }
    out
}

/// RNG stream for the given master seed and counter path.
pub fn stream_rng(master: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, path))
}
