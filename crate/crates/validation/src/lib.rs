//! Acceptance criteria for `cubic-lab`; the checks live in `tests/acceptance.rs`.
