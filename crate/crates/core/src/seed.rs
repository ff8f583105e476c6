//! Seeding contract: a 64-bit master seed plus a replication index selects
//! an independent ChaCha stream. Results never depend on which worker thread
//! ran a replication.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn stream(master_seed: u64, replication: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(replication);
    rng
}

/// Derives a sub-seed for an independent experiment (e.g. one sweep cell)
/// so that cells do not share streams.
pub fn derive(master_seed: u64, label: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = master_seed ^ label.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
