use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Domains keep RNG streams of unrelated components apart even when they
/// share a seed and index.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Domain {
    Split = 1,
    Forest = 2,
    Synthetic = 3,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// RNG for component `index` of `domain`, derived only from `seed`.
pub(crate) fn component_rng(seed: u64, domain: Domain, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ ((domain as u64) << 56)));
    rng.set_stream(index);
    rng
}
