//! Scenario generation and the experiment harness.

mod generator;
mod harness;
mod report;

pub use generator::{generate_instance, GapSampler, GeneratorError, Group, ScenarioParams};
pub use harness::{
    generate_group, run_matrix, BenchInstance, Budget, BudgetUnit, ResultRow, ResultTable, RunRecord, THREADS_ENV,
};
pub use report::{emit, Format, ReportError, COLUMNS};
