//! Benchmarks live in `benches/`. This library only names the points they
//! share.

/// A Region 1 castle with a few million matchings.
pub const LARGE: (i64, i64, i64) = (4, 3, 2);

/// Points small enough to enumerate in well under a second.
pub const SMALL: [(i64, i64, i64); 3] = [(1, 1, 1), (2, 1, 0), (-1, 3, 1)];
