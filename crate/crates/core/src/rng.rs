//! Seeded random streams.
//!
//! Every consumer of randomness (one per player and oracle) gets its own
//! ChaCha stream derived from the run seed, so runs are reproducible and
//! player draws are independent of each other.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream identifiers. Player streams use their index directly; the tags
/// below sit far above any plausible player count.
pub mod tag {
    pub const SFO_NOISE: u64 = 0;
    pub const SPSA_DIRECTIONS: u64 = 1 << 32;
    pub const BIAS_DIRECTION: u64 = 2 << 32;
    pub const PAYOFF_STREAM: u64 = 3 << 32;
}

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generator for a single indexed draw, e.g. the payoff vector of stage `n`.
pub fn indexed(seed: u64, stream_id: u64, index: u64) -> ChaCha8Rng {
    let mut rng = stream(seed, stream_id);
    rng.set_word_pos(u128::from(index) << 16);
    rng
}
