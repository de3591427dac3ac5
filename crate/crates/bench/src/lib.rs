//! Benchmarks for the solver, tableau compiler, evaluator and deciders live
//! in `benches/pipeline.rs`; run them with `cargo bench -p forge-bench`.
