//! Criterion benchmarks for `ruin-core`; see `benches/`.
