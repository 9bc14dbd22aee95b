//! Criterion benchmarks for the oracles and the P5 pipeline live under `benches/`.
