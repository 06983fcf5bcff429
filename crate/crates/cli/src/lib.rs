//! Config-driven scenario runner: parses JSON experiment descriptions,
//! dispatches to the physics library and writes CSV/JSON artifacts.

pub mod config;
pub mod error;
pub mod golden;
pub mod output;
pub mod run;

pub use config::{validate_config, ScenarioConfig, ScenarioKind};
pub use error::{exit, CliError, CliResult};
pub use golden::{compare_golden, GoldenReport, GOLDEN_TOLERANCE};
pub use run::{run_scenario, RunOptions};
