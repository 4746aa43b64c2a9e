use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The one RNG used everywhere. ChaCha8 keyed from a seed plus a tag path
/// gives independent, platform-stable streams.
pub type Rng = ChaCha8Rng;

/// Derive an independent RNG stream from a base seed and a structural tag
/// path (e.g. `[level, sample_index]`). Equal inputs give equal streams;
/// distinct tag paths give statistically independent streams. This is what
/// makes parallel Monte Carlo runs bitwise reproducible regardless of
/// scheduling order.
pub fn derive_rng(seed: u64, tags: &[u64]) -> Rng {
    let mut state = splitmix64(seed ^ 0x9e37_79b9_7f4a_7c15);
    for (i, &t) in tags.iter().enumerate() {
        state = splitmix64(state ^ splitmix64(t.wrapping_add(i as u64 + 1)));
    }
    let mut key = [0u8; 32];
    let mut s = state;
    for chunk in key.chunks_mut(8) {
        s = splitmix64(s);
        chunk.copy_from_slice(&s.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
