//! Seeded random streams.
//!
//! Every stochastic routine in the crate draws from ChaCha8 seeded through
//! [`rand::SeedableRng::seed_from_u64`]. ChaCha output is specified
//! independently of platform and word size, so a given `(seed, stream)` pair
//! yields the same draws everywhere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Generator for `seed` on the default stream.
pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` under `seed`; used to give parallel workers
/// (QPD branches, benchmark trials) schedule-independent randomness.
pub fn substream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A child seed, first draw of `substream(seed, stream)`.
pub fn derive(seed: u64, stream: u64) -> u64 {
    use rand::RngCore;
    substream(seed, stream).next_u64()
}
