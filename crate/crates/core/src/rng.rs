//! Seedable, splittable random streams.
//!
//! Every random quantity in a run is drawn from a stream identified by
//! `(master seed, domain, index)`. Streams never overlap, and the mapping does
//! not depend on how work is scheduled across threads, so parallel and
//! sequential runs produce identical outputs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Independent families of streams used by the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Domain {
    Modulation = 1,
    Channel = 2,
    Reconciliation = 3,
    Subsampling = 4,
    PrivacyAmplification = 5,
    Test = 6,
}

/// Returns the stream `index` of `domain` under `seed`.
pub fn stream(seed: u64, domain: Domain, index: u64) -> StreamRng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&splitmix(seed).to_le_bytes());
    key[8..16].copy_from_slice(&splitmix(seed ^ 0x5851_f42d_4c95_7f2d).to_le_bytes());
    key[16..24].copy_from_slice(&splitmix(domain as u64).to_le_bytes());
    key[24..].copy_from_slice(&splitmix(seed.rotate_left(17) ^ domain as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
