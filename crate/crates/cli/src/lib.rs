//! The `dgker` command-line surface and the acceptance harness.

mod commands;
pub mod harness;

pub use commands::{execute, Cli, Command};

/// Exit status for usage, parse and input errors.
pub const USAGE_EXIT: u8 = 3;
