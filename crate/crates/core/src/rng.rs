//! Deterministic random streams.
//!
//! Every stochastic component draws from a ChaCha8 stream (256-bit key,
//! 64-bit stream id) derived from `(master seed, tag, index)`. Ensemble
//! member `k` of an experiment uses stream id `k`, so results never depend
//! on scheduling.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::math;

pub type SimRng = ChaCha8Rng;

/// Identifier reported by version banners and reports.
pub const RNG_ID: &str = "chacha8/splitmix64-key/stream-per-member";

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sub-stream `index` of the key derived from `(master, tag)`.
pub fn stream(master: u64, tag: u64, index: u64) -> SimRng {
    let mut state = master ^ tag.wrapping_mul(0xD6E8_FEB8_6659_FD93);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Uniform on `[0, 1)` with 53 random bits.
#[inline]
pub fn uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Exponential variate with the given rate (`rate > 0`).
#[inline]
pub fn exponential<R: RngCore + ?Sized>(rng: &mut R, rate: f64) -> f64 {
    // 1 − U lies in (0, 1], so the logarithm is finite.
    -math::ln(1.0 - uniform(rng)) / rate
}
