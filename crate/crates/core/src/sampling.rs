//! Seeded sampling shared by the closure probe and the randomized checks.
//!
//! The stream is ChaCha8 seeded through `SeedableRng::seed_from_u64`. Each
//! unit draw takes the top 53 bits of one `next_u64` word and scales by
//! 2^-53, so `unit()` lies in `[0, 1)` and every draw consumes exactly one
//! word. Any implementation that reproduces ChaCha8 and this mapping
//! reproduces the same samples.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const UNIT_SCALE: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform draw in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * UNIT_SCALE
    }

    /// Uniform draw in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Uniformly distributed point on the unit sphere (Archimedes' projection).
    pub fn unit_vector(&mut self) -> [f64; 3] {
        let z = self.uniform(-1.0, 1.0);
        let phi = self.uniform(0.0, std::f64::consts::TAU);
        let rho = (1.0 - z * z).max(0.0).sqrt();
        [rho * phi.cos(), rho * phi.sin(), z]
    }

    /// Uniformly distributed point in the closed unit ball.
    pub fn ball_vector(&mut self) -> [f64; 3] {
        let dir = self.unit_vector();
        let radius = self.unit().cbrt();
        [radius * dir[0], radius * dir[1], radius * dir[2]]
    }
}
