//! Seeded random source and exact-uniform range reduction by rejection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::SampleError;

/// Replayable pseudo-random source. Equal seeds give equal draw sequences.
#[derive(Clone, Debug)]
pub struct SeededSource {
    seed: u64,
    rng: ChaCha12Rng,
    draws: u64,
    accepted: u64,
}

impl SeededSource {
    pub fn new(seed: u64) -> Self {
        SeededSource {
            seed,
            rng: ChaCha12Rng::seed_from_u64(seed),
            draws: 0,
            accepted: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw on `[1, n]` from the underlying generator.
    pub fn draw_in(&mut self, n: u64) -> u64 {
        self.draws += 1;
        self.rng.random_range(1..=n)
    }

    /// Uniform on `[1, m]`, reduced from draws on `[1, n]`.
    ///
    /// A draw `R` is accepted when `R <= n - (n mod m)` and mapped to
    /// `(R mod m) + 1`; otherwise it is redrawn. Every residue class mod `m`
    /// then has exactly `n div m` accepted preimages.
    pub fn uniform_index(&mut self, m: u64, n: u64) -> Result<u64, SampleError> {
        if m == 0 {
            return Err(SampleError::EmptyRange);
        }
        if m > n {
            return Err(SampleError::RangeTooLarge { m, n });
        }
        let limit = n - n % m;
        loop {
            let r = self.draw_in(n);
            if r <= limit {
                self.accepted += 1;
                return Ok(r % m + 1);
            }
        }
    }

    /// Total `[1, n]` draws made so far, accepted or not.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Number of completed `uniform_index` calls.
    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    /// Mean draws per accepted `uniform_index` call.
    pub fn draws_per_sample(&self) -> f64 {
        if self.accepted == 0 {
            0.0
        } else {
            self.draws as f64 / self.accepted as f64
        }
    }

    /// Fresh 64-bit word, for callers that only need a seed (stream generators).
    pub fn next_u64(&mut self) -> u64 {
        self.rng.random()
    }

    /// Bernoulli trial with success probability `p`.
    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.random_bool(p.clamp(0.0, 1.0))
    }

    /// Uniform on `[0, n)` without the rejection bookkeeping.
    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }
}
