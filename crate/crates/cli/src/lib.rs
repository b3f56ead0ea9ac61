//! Batch front end for the estimation-bound library: configuration parsing,
//! subcommand orchestration, and CSV/JSON emission.

pub mod commands;
pub mod config;
pub mod output;
