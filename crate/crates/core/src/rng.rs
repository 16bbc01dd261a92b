//! Seeded, platform-independent randomness.
//!
//! All sampling uses ChaCha8, a counter-based generator with a stable output
//! stream across platforms and versions. An experiment is seeded once with a
//! 64-bit value; independent per-task substreams come from the cipher's
//! stream parameter, so results do not depend on how tasks are scheduled.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Name of the generator, for experiment records.
pub const GENERATOR: &str = "ChaCha8";

/// The substream of a seeded experiment assigned to one task.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform draw from `[0, bound)` by rejection; exact for any bound >= 1.
pub fn uniform_u64<R: RngCore + ?Sized>(rng: &mut R, bound: u64) -> u64 {
    assert!(bound > 0);
    if bound.is_power_of_two() {
        return rng.next_u64() & (bound - 1);
    }
    let zone = u64::MAX - (u64::MAX % bound);
    loop {
        let r = rng.next_u64();
        if r < zone {
            return r % bound;
        }
    }
}
