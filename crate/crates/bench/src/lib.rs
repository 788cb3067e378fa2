//! Benchmark fixtures shared by the criterion targets.

/// Pairs small enough to search quickly but large enough to be timed.
pub const SEARCH_PAIRS: &[(u64, usize)] = &[(2, 10), (3, 6), (4, 5), (5, 4), (7, 3)];

/// Pairs settled by bounds alone, without enumerating elements.
pub const CERTIFY_PAIRS: &[(u64, u64)] = &[(5, 9), (4, 36), (17, 16), (2, 45), (13, 24)];
