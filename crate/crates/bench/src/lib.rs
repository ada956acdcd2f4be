//! Criterion benchmarks for `ciforge`; run them with `cargo bench -p ciforge-bench`.
