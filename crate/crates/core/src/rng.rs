//! Seeded, platform-independent stream of uniform draws.
//!
//! The dense samplers consume exactly one draw per ground-set index in pivot
//! order, regardless of the inclusion outcome, so blocked and unblocked
//! variants sharing a seed see identical draws.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct RngStream {
    rng: ChaCha8Rng,
    seed: u64,
    draws: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
            draws: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of uniform draws consumed so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Next uniform draw in [0, 1) with 53 random bits.
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        self.draws += 1;
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal draw via Box-Muller (consumes two uniforms).
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = loop {
            let u = self.next_uniform();
            if u > 0.0 {
                break u;
            }
        };
        let u2 = self.next_uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Uniform integer in [0, bound) by scaling a single uniform draw.
    pub fn next_index(&mut self, bound: usize) -> usize {
        assert!(bound > 0);
        let u = self.next_uniform();
        ((u * bound as f64) as usize).min(bound - 1)
    }
}
