//! Scenario runner for the `udw` command-line tool.

pub mod compute;
pub mod output;
pub mod presets;
pub mod runner;
pub mod scenario;
