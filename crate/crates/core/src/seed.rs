//! Hierarchical seeds.
//!
//! Every random draw in a run comes from a stream derived from the master
//! seed and the ordinal path of the thing being drawn (epoch, batch, sample,
//! evaluation). Results therefore do not depend on how work is scheduled
//! across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Seed {
    /// Seed of the `ordinal`-th child stream.
    pub fn child(self, ordinal: u64) -> Seed {
        Seed(splitmix64(splitmix64(self.0) ^ ordinal.wrapping_mul(GOLDEN)))
    }

    pub fn path(self, ordinals: &[u64]) -> Seed {
        ordinals.iter().fold(self, |s, &o| s.child(o))
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}
