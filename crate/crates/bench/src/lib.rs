//! Criterion benchmarks for the casimir-core kernels; see `benches/`.
