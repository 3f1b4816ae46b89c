//! Seeded random sources.
//!
//! Every stochastic operation in this crate takes `&mut R` where
//! `R: Rng + ?Sized`, so callers may plug in any generator. Runs driven by a
//! [`SimulationConfig`](crate::dynamics::SimulationConfig) use ChaCha8 with
//! distinct streams for the dynamics, the random initial network and the
//! random initial opinions, so changing how one of them is produced never
//! shifts the draws of the others.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type RandomSource = ChaCha8Rng;

/// Stream used by the opinion-update and rewiring draws.
pub const DYNAMICS_STREAM: u64 = 0;
/// Stream used when the initial network is generated at random.
pub const NETWORK_STREAM: u64 = 1;
/// Stream used when the initial opinions are generated at random.
pub const OPINION_STREAM: u64 = 2;

pub fn seeded(seed: u64) -> RandomSource {
    seeded_stream(seed, DYNAMICS_STREAM)
}

pub fn seeded_stream(seed: u64, stream: u64) -> RandomSource {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One draw from Uniform[0, 1).
#[inline]
pub fn uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen::<f64>()
}
