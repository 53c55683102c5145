//! Command-line front end, file formats and verification suites built on
//! [`wforge_core`].

pub mod cli;
pub mod config;
pub mod context;
pub mod error;
pub mod export;
pub mod listing;
pub mod report;
pub mod suite;

pub use error::{CliError, CliResult};
