//! Command-line front end: JSON schemas, commands and deterministic reports.

pub mod commands;
pub mod corpus;
pub mod report;
pub mod schema;

pub use commands::{run, Command};
pub use report::Report;
