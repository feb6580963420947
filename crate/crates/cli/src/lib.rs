//! Command-line driver for the `modburgers` crate: single runs, trace
//! analysis and parameter sweeps, with CSV traces and JSON manifests.

pub mod args;
pub mod commands;
pub mod error;
pub mod manifest;
pub mod trace_csv;

pub use error::{CliError, Result};
