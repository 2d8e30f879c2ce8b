//! Experiment orchestration: JSON-configured runs, CSV/JSON outputs, and the
//! verification battery behind the `kml` command-line tool.

pub mod config;
pub mod experiments;
pub mod report;

pub use config::{CSpec, GridCfg, PotentialCfg, RunConfig};
pub use report::Report;
