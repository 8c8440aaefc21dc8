//! Counter-based stream derivation for reproducible parallel Monte Carlo.
//!
//! Every random draw in the crate comes from a ChaCha8 stream keyed by
//! (master seed, replica index, stream role). Replicas are independent by
//! construction and results do not depend on scheduling order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamRole {
    Increments,
    Atoms,
    Hits,
}

impl StreamRole {
    fn tag(self) -> u64 {
        match self {
            StreamRole::Increments => 0x2545_f491_4f6c_dd1d,
            StreamRole::Atoms => 0x9e37_79b9_7f4a_7c15,
            StreamRole::Hits => 0xc2b2_ae3d_27d4_eb4f,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive the seed for one replica from the master seed.
pub fn replica_seed(master: u64, replica: u64) -> u64 {
    splitmix64(splitmix64(master) ^ splitmix64(replica.wrapping_mul(0xa076_1d64_78bd_642f)))
}

/// RNG for one (path seed, role) pair.
pub fn stream_rng(path_seed: u64, role: StreamRole) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    let mut state = splitmix64(path_seed ^ role.tag());
    for chunk in seed.chunks_exact_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}
