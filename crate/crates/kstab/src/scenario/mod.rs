//! Scenario files, the dispatching runner, and verification reports.

mod report;
mod runner;
mod schema;

pub use report::{run_file, verify_all, Report, ReportEntry, Verdict};
pub use runner::{parse_scenario, run_scenario, ScenarioError};
pub use schema::*;
