//! Counter-based seed derivation.
//!
//! Trial `i` of a campaign with master seed `m` uses
//! `splitmix64(m + (i + 1) · γ)` with `γ = 0x9E3779B97F4A7C15`, i.e. the
//! `(i+1)`-th output of the SplitMix64 stream started at `m`. Any trial can be
//! regenerated from `(m, i)` alone, independent of execution order.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(state: u64) -> u64 {
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn child_seed(master: u64, counter: u64) -> u64 {
    splitmix64(master.wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}
