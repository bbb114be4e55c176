//! Front end for the `rballoc` allocator: scenario files, bandwidth sweeps,
//! complexity tables and CSV output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod output;
pub mod report;
pub mod scenario;
pub mod sweep;

pub use commands::{run, Cli, CliError, Command, PoolMode};
pub use report::{report_complexity, ComplexityRow};
pub use scenario::{load_scenario, parse_scenario, ScenarioError, SCHEMA_VERSION};
pub use sweep::{run_sweep, sweep_points, SweepRow};
