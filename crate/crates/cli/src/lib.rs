//! Command-line front-end for `keygraph`: JSON configs, figure presets,
//! CSV sweeps with manifests and scaling reports.

pub mod app;
pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
pub mod presets;

pub use app::{run, Cli};
pub use error::{CliError, CliResult};
