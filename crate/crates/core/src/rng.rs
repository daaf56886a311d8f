//! Seeded random streams.
//!
//! Every random draw in the crate comes from a ChaCha8 stream (`rand_chacha`)
//! whose 64-bit seed is derived from a root seed and a path of labels. Labels
//! are folded in with the SplitMix64 finalizer, so sibling streams are
//! independent and adding a new consumer never shifts an existing one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 20_240_611;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn label_hash(label: &str) -> u64 {
    // FNV-1a
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// A node in the labeled seed tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedPath(u64);

impl SeedPath {
    pub fn root(seed: u64) -> Self {
        SeedPath(splitmix64(seed))
    }

    pub fn label(self, label: &str) -> Self {
        SeedPath(splitmix64(self.0 ^ label_hash(label)))
    }

    pub fn index(self, idx: u64) -> Self {
        SeedPath(splitmix64(self.0.rotate_left(17) ^ splitmix64(idx)))
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn rng(self) -> StreamRng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}
