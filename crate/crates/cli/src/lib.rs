//! Library side of the `perm-moments` command: argument handling, CSV
//! ingestion, the subcommands and their reports.

pub mod commands;
pub mod config;
pub mod error;
pub mod input;
pub mod report;

pub use commands::{run, CommandOutput};
pub use config::{Cli, CommandKind, RunConfig};
pub use error::CliError;
