//! Library side of the `entq` command-line tool.
//!
//! Each subcommand's computation lives here so it can be tested without
//! spawning the binary; `main.rs` only parses flags and writes output.

pub mod builtins;
pub mod dicke;
pub mod error;
pub mod figure2;
pub mod propcheck;
pub mod table1;

pub use error::{CliError, ExitStatus};
