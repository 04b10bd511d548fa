//! Command-line front end: text formats, report rendering and the `projmln`
//! commands.

mod cli;
pub mod format;
pub mod report;

pub use cli::{run, CliError, Outcome};
