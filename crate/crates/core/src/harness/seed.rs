use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// The SplitMix64 output mix. A bijection on `u64`.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of replication `rep`: the `rep`-th output of a SplitMix64 sequence
/// started at `master`. Distinct for distinct `rep < 2⁶⁴`.
pub fn stream_seed(master: u64, rep: u64) -> u64 {
    splitmix64(master.wrapping_add(rep.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Independent random stream for replication `rep`.
pub fn stream_rng(master: u64, rep: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(master, rep))
}
