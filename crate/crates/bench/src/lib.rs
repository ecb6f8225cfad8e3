//! Configuration files, report formats and the `sdc-bench` command line
//! for the `sdc-core` superdense-coding simulator.

pub mod cli;
pub mod config;
pub mod report;

pub use cli::{execute, run_command, Cli, CliError};
pub use config::{load_config, parse_config, resolve_config, ConfigError, RunConfig, CONFIG_ENV};
pub use report::{emit_report, SCHEMA_VERSION};
