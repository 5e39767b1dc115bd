//! Seed splitting.
//!
//! Every random stream is keyed by a path of indices below the master seed:
//!
//! ```text
//! trial     = derive(master, trial_index)
//! location  = derive(trial, location_index)
//! stream    = derive(location, TERMINAL | CHANNEL)
//! ```
//!
//! where `derive(parent, i) = splitmix64(parent ^ splitmix64(i))`. The
//! terminal position and the channel draws use separate streams, so runs that
//! differ only in channel parameters visit the same terminal positions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream tag for sampling the terminal position.
pub const TERMINAL: u64 = 0;
/// Stream tag for fading and estimation noise.
pub const CHANNEL: u64 = 1;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One SplitMix64 output step for the given state.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive(parent: u64, index: u64) -> u64 {
    splitmix64(parent ^ splitmix64(index))
}

pub fn trial_seed(master: u64, trial: usize) -> u64 {
    derive(master, trial as u64)
}

pub fn stream(trial_seed: u64, location: usize, tag: u64) -> SimRng {
    SimRng::seed_from_u64(derive(derive(trial_seed, location as u64), tag))
}
