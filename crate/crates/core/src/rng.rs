//! Seeded random numbers.
//!
//! All randomness in the crate goes through [`SeededRng`]: ChaCha8 seeded
//! with `ChaCha8Rng::seed_from_u64(seed)` and switched to an explicit stream
//! index, so independent consumers (optimizer restarts, initial states) get
//! non-overlapping sequences that are identical on every platform.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Debug, Clone)]
pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        SeededRng(rng)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `0..bound` (`bound > 0`).
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0);
        ((self.0.next_u64() as u128 * bound as u128) >> 64) as usize
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }
}
