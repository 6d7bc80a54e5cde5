//! Experiment runner: configs, figure presets, comparisons and output files.

pub mod compare;
pub mod config;
pub mod curves;
pub mod error;
pub mod output;
pub mod preset;
pub mod runner;

pub use compare::{compare, ComparisonReport, Tolerance, Track};
pub use config::{parse_config, Engine, ExperimentConfig};
pub use error::{CliError, ConfigError, Result};
pub use preset::{preset, PresetId};
pub use runner::{run_config, run_preset, simulate, RunOptions};
