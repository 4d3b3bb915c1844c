//! Library surface of the caution-blend CLI: config schema, result record,
//! and the runner. The binary in `main.rs` is a thin wrapper.

pub mod config;
pub mod error;
pub mod record;
pub mod runner;
