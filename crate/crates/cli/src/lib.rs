//! Command-line front end: configuration files, trajectory CSV output and run
//! summaries for the `wmr-pendulum` simulator.

pub mod config;
pub mod output;
pub mod runner;

pub use config::{parse_config, ConfigError, RunConfig};
pub use output::{Column, Summary};
pub use runner::{execute, run, Outcome, RunError};
