pub(crate) const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finaliser; a bijection on `u64`.
#[inline]
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Output `counter` of the SplitMix64 stream started at `state`.
#[inline]
pub(crate) fn splitmix_at(state: u64, counter: u64) -> u64 {
    mix64(state.wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}
