//! Command-line front end for `neocalc_core`.
//!
//! Each subcommand reads its input, runs the analysis and returns a
//! [`ReportDocument`]; `main` only prints it and maps errors to exit codes
//! (2 for rejected input, 3 for unparsable input).

pub mod args;
pub mod commands;
pub mod document;
pub mod error;
pub mod input;

pub use args::{Cli, Command};
pub use commands::run;
pub use document::{ReportDocument, Warning};
pub use error::CliError;
