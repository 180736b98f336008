//! Criterion benchmarks for chromatika; see `benches/`.
