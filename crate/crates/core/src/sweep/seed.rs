/// SplitMix64 increment (the 64-bit golden ratio).
const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
/// Multipliers of the SplitMix64 output function.
const MIX_MUL_1: u64 = 0xbf58_476d_1ce4_e5b9;
const MIX_MUL_2: u64 = 0x94d0_49bb_1331_11eb;

/// SplitMix64 finalizer. A bijection on `u64`.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(MIX_MUL_1);
    z = (z ^ (z >> 27)).wrapping_mul(MIX_MUL_2);
    z ^ (z >> 31)
}

/// Seed for one run of a sweep.
///
/// The indices are packed as `grid_index << 32 | replication_index`, then
/// mixed, xored with the master seed and mixed again. Each step is a
/// bijection, so for a fixed master seed distinct index pairs below `2^32`
/// always give distinct seeds. Pure integer arithmetic, identical on every
/// platform.
pub fn derive_seed(master_seed: u64, grid_index: u64, replication_index: u64) -> u64 {
    debug_assert!(grid_index < 1 << 32 && replication_index < 1 << 32);
    let key = (grid_index << 32) | (replication_index & 0xffff_ffff);
    mix64(master_seed ^ mix64(key.wrapping_add(GOLDEN_GAMMA)))
}
