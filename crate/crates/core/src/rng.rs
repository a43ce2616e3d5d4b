//! Seeded random streams.
//!
//! All randomness comes from ChaCha8 seeded with a 64-bit `seed` via
//! `seed_from_u64`. Independent tasks never share a generator: task `i`
//! of a batch draws from stream `i` (`set_stream(i)`). Because the
//! assignment depends only on the task index, parallel and sequential
//! runs consume identical random numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Generator for stream `stream` of the family keyed by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
