//! Command-line driver and file formats for the `qwalk` library.
//!
//! - [`format`]: CSV/JSON result tables and distribution files.
//! - [`clicks`]: CSV and binary click-stream files.
//! - [`manifest`]: run manifests with output checksums.
//! - [`parallel`]: multi-threaded emulation.
//! - [`run`]: the `qwalk` command line.

pub mod app;
pub mod clicks;
mod error;
pub mod format;
pub mod manifest;
pub mod parallel;

pub use app::{run, OUTPUT_DIR_ENV};
pub use error::CliError;
