//! File formats, run reports and command implementations behind the `bell`
//! binary.

pub mod cli;
pub mod commands;
pub mod error;
pub mod format;
pub mod report;

pub use commands::run;
pub use error::{CliError, Result};
pub use report::RunReport;
