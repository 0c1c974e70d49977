//! Parallel execution of independent scenarios.
//!
//! Each scenario carries its own seed, so results do not depend on thread
//! count or scheduling; outputs keep input order.

use rayon::prelude::*;
use schurorder_core::harness::{
    generate_suite, run_scenario, summarize, Scenario, ScenarioOutcome, SuiteConfig, SuiteSummary,
};

use crate::AppError;

pub fn run_all(scenarios: &[Scenario]) -> Vec<ScenarioOutcome> {
    scenarios.par_iter().map(run_scenario).collect()
}

pub struct SuiteRun {
    pub scenarios: Vec<Scenario>,
    pub outcomes: Vec<ScenarioOutcome>,
    pub summary: SuiteSummary,
}

/// Generates the suite for `cfg` and runs every scenario.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteRun, AppError> {
    let scenarios = generate_suite(cfg)?;
    let outcomes = run_all(&scenarios);
    let summary = summarize(&outcomes);
    Ok(SuiteRun { scenarios, outcomes, summary })
}
