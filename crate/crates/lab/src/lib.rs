//! Experiments, configuration, file formats and the `pmelab` command line
//! on top of `pmelab-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod io;

pub use config::{parse_config, Config, ConfigError};
pub use error::{LabError, LabResult};
