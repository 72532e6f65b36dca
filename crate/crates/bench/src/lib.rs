//! Benchmark-only crate; see `benches/cubature.rs`.
