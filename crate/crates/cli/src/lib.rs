//! Scenario files, runs and emitted products for the `tcm3` binary.

pub mod config;
pub mod run;
pub mod series;
pub mod svg;

pub use config::{parse_config, Atoms, ConfigError, Products, Scenario};
pub use run::{read_manifest, run_scenario, simulate, write_outputs, Invariants, RunError, Simulation, Snapshot};
pub use series::{CsvError, Series};
