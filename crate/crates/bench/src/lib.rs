//! Criterion benchmarks for the SDP-backed routines live under `benches/`.
