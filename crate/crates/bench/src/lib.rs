//! Benchmark crate; see `benches/clustering.rs`.
