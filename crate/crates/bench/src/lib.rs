//! Criterion benchmarks for `tschur-core`; see `benches/core_ops.rs`.
