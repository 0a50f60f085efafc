//! Command-line front end: `ingest`, `analyze` and `compress`.

pub mod args;
pub mod commands;
pub mod report;

pub use commands::CliError;
