//! Triangular bijection between unordered index pairs `(x, y)`, `x < y`,
//! and a flat pair-space index. Pair-space searches sample flat indices
//! and convert back in O(1).

/// Number of unordered pairs over a domain of size `n`.
pub fn pair_count(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Flat index of the pair `(x, y)` with `x < y`.
pub fn pair_to_index(x: u64, y: u64) -> u64 {
    debug_assert!(x < y);
    y * (y - 1) / 2 + x
}

/// Inverse of [`pair_to_index`].
pub fn index_to_pair(t: u64) -> (u64, u64) {
    // y is the largest integer with y(y-1)/2 <= t; float guess, then fix.
    let mut y = ((1.0 + (1.0 + 8.0 * t as f64).sqrt()) / 2.0) as u64;
    while y * (y - 1) / 2 > t {
        y -= 1;
    }
    while (y + 1) * y / 2 <= t {
        y += 1;
    }
    let x = t - y * (y - 1) / 2;
    (x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bijection_is_exhaustive_at_small_n() {
        for n in 0..=40u64 {
            let mut t = 0;
            for y in 1..n {
                for x in 0..y {
                    assert_eq!(pair_to_index(x, y), t);
                    assert_eq!(index_to_pair(t), (x, y));
                    t += 1;
                }
            }
            assert_eq!(t, pair_count(n));
        }
    }

    #[test]
    fn round_trip_at_large_indices() {
        // Largest domain the workbench targets.
        let n: u64 = 1 << 20;
        for t in [0, 1, pair_count(n) / 3, pair_count(n) - 1] {
            let (x, y) = index_to_pair(t);
            assert!(x < y && y < n);
            assert_eq!(pair_to_index(x, y), t);
        }
    }
}
