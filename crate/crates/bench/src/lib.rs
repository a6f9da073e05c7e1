//! Fixtures shared by the criterion benches.

/// `(N, p)` pairs spanning moderate to very large threshold counts `n0`.
pub const WORKLOADS: &[(u64, f64)] = &[
    (2, 0.5),
    (10, 0.05),
    (65, 1e-3),
    (1000, 1e-6),
    (100_000, 1e-7),
];
