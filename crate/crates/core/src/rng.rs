//! Seeded generators. Every randomized routine draws from ChaCha20 keyed by
//! the user's 64-bit seed, with a fixed stream number per purpose so that,
//! for example, changing the refinement probability never perturbs the
//! parabola parameters drawn under the same seed.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type ExperimentRng = ChaCha20Rng;

/// Stream for parabola parameter draws.
pub const PARAMS_STREAM: u64 = 0;
/// Stream for random refinement.
pub const REFINE_STREAM: u64 = 1;
/// Stream for Monte Carlo containment trials.
pub const MONTECARLO_STREAM: u64 = 2;

pub fn stream(seed: u64, stream: u64) -> ExperimentRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
