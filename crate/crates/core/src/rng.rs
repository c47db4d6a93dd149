//! Deterministic random streams.
//!
//! Every unit of work (an arm's criterion draws, one simulated trial, ...)
//! gets its own ChaCha8 stream addressed by a path of integers under a master
//! seed, so results do not depend on execution order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes a stream path to a 64-bit stream id.
pub fn stream_id(path: &[u64]) -> u64 {
    let mut h = splitmix64(path.len() as u64);
    for &p in path {
        h = splitmix64(h ^ splitmix64(p));
    }
    h
}

/// Independent generator for `path` under `master`.
pub fn substream(master: u64, path: &[u64]) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream_id(path));
    rng
}
