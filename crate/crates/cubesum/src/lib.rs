//! Command-line front end, output formats and the classification cache.

pub mod backend;
pub mod cache;
pub mod commands;
pub mod output;

pub use backend::Threaded;
pub use commands::{run, Cli, CliError};
pub use output::{render, Format, OutputRecord};
