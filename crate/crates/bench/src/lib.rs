//! Criterion benchmarks for `corrdyn-core`; see `benches/kernels.rs`.
