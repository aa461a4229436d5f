//! Command-line layer for `biaspca`: dataset loading, subcommands, and report output.

pub mod args;
pub mod commands;
pub mod dataset;
pub mod error;
pub mod report;

pub use args::Cli;
pub use commands::{execute, Output};
pub use error::CliError;
