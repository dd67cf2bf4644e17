//! Library side of the `pglcount` command: run reports, subcommands and the
//! self-test harness.

pub mod checks;
pub mod commands;
pub mod report;

pub use report::{Criterion, RunReport};
