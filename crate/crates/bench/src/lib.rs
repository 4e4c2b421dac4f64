//! Criterion benchmarks for `d4lab-core`; see `benches/surface.rs`.
