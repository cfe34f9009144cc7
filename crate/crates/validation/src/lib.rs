//! Acceptance checks over seeded ensembles; the checks live in
//! `tests/acceptance.rs` and run with `cargo test -p wielandt-validation --test acceptance`.
