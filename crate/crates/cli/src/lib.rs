//! Front end of the `lspline` binary: literal and CSV parsing, the JSON
//! result documents, and the subcommands.

pub mod commands;
pub mod error;
pub mod input;
pub mod literal;
pub mod report;
pub mod selftest;

pub use commands::{run, Command, EvalGrid, JobConfig};
pub use error::{CliError, CliResult};
