//! Seeded, splittable random streams.
//!
//! A session seed names a ChaCha20 key; each round draws from its own stream
//! of that key so rounds are reproducible independently of one another.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type QssRng = ChaCha20Rng;

pub fn seeded(seed: u64) -> QssRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Independent substream `stream` of the generator named by `seed`.
pub fn substream(seed: u64, stream: u64) -> QssRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
