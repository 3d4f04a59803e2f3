//! Command-line front end and IO layer for the policy reasoner: file
//! formats (ledger persistence), the benchmark runner, report rendering,
//! and the `plcheck` subcommands.

pub mod bench;
pub mod cli;
pub mod ledger_file;
pub mod report;

pub use cli::{run, Cli};
