//! Benchmark-only crate. See `benches/pipeline.rs` for the Criterion
//! benchmarks of the moment formulas, the two oracles, the sampler, and the
//! pixel-scan engine.
