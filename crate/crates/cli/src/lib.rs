//! Command-line front end: file formats, report files and commands.

pub mod commands;
pub mod io;
pub mod report;

pub use commands::{run, Cli, Outcome};
