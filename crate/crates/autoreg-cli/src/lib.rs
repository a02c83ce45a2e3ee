//! Command implementations behind the `autoreg` binary.
//!
//! Split from `main.rs` so integration tests can exercise parsing and
//! rendering without spawning a process.

pub mod config;
pub mod error;
pub mod experiment;
pub mod fit;
pub mod formats;
pub mod manifest;
pub mod plot;
pub mod svg;
