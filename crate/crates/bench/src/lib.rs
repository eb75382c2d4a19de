//! Benchmarks for the ellr-core kernels live in `benches/`.
