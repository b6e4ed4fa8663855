use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic generator used by every sampling check in the crate.
pub type SeededRng = ChaCha8Rng;

/// Generator for a master seed.
pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives the seed of shard `index` from a master seed (splitmix64 step).
pub fn shard_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
