//! Criterion benchmarks for hilb2-core; see `benches/`.
