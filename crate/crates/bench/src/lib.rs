//! Criterion benchmarks for `evsc-core`; see `benches/`.
