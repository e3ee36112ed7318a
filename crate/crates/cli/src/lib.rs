//! Library half of the `opacity-audit` command-line tool: file formats,
//! JSON reports and subcommand implementations.

pub mod commands;
pub mod files;
pub mod report;

pub use commands::{CommandOutput, Exit};
pub use files::InputError;
