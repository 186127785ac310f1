//! Initial conditions, run configuration, snapshots and the run driver.

mod catalog;
pub mod config;
pub mod driver;
pub mod snapshot;

pub use catalog::{make_ic, Scenario, ScenarioError};
pub use config::{load_config, ConfigError, RawConfig, RunConfig};
pub use snapshot::{read_snapshot, write_snapshot, Snapshot, SnapshotError};
