//! Stable seed derivation.
//!
//! Trial seeds are derived with a fixed splitmix64/FNV-1a mix so that
//! records produced from the same master seed are identical across
//! platforms and releases. Nothing here is cryptographic; the only goal
//! is a well-spread, documented, stable mapping.

/// One splitmix64 scramble step.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives an independent child seed from `seed` and a stream tag.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    splitmix64(seed ^ splitmix64(tag))
}

/// FNV-1a over a byte string, used to fold textual identifiers into seeds.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Stable per-trial seed: `hash(master, algorithm, n, trial)`.
pub fn trial_seed(master: u64, algorithm: &str, n: u64, trial: u64) -> u64 {
    let mut s = splitmix64(master);
    s = splitmix64(s ^ fnv1a(algorithm.as_bytes()));
    s = splitmix64(s ^ n);
    splitmix64(s ^ trial)
}
