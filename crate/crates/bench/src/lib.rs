//! Criterion benchmarks for `surfmmp-core`; see `benches/`.
