//! Parameter sets shared by the benchmarks.

/// (n, p) pairs spanning small to sweep-sized enumerations.
pub const CASES: &[(usize, u32)] = &[(3, 3), (4, 5), (5, 7), (6, 5), (10, 2)];
