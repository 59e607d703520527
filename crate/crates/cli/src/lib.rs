//! Command-line front end for `pubbias-core`.
//!
//! Every subcommand renders to a string first ([`cli::render`]) so the
//! output can be tested without spawning a process.

pub mod cli;
pub mod error;
pub mod figures;
pub mod format;
pub mod reports;
pub mod svg;
pub mod table1;

pub use error::CliError;
