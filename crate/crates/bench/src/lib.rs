//! Benchmarks for the reduction engine; see `benches/`.
