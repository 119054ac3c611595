//! Acceptance suite for `curie-core`. See `tests/acceptance.rs`.
