//! Command-line front end: argument handling, dispatch to the library,
//! CSV/JSON reporting and the `verify` suites.

pub mod commands;
pub mod pool;
pub mod report;
pub mod suites;

pub use commands::{dispatch, run, Cli, Exit};
pub use report::{Assertion, RunReport, Table};
