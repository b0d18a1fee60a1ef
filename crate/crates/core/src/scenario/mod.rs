//! Named experiments: simulate a batch of seeds, hedge or measure along
//! each level, aggregate per level and check thresholds.

mod builtin;
mod config;
mod fit;
mod report;
mod runner;

pub use builtin::{builtin_scenario, BUILTIN_SCENARIOS};
pub use config::{
    AsianSpec, Experiment, FloorCheck, InstrumentSpec, PathKind, PathSpec, ScenarioConfig, Thresholds,
    VariationStatistic, VolPathSpec,
};
pub use fit::{fit_convergence, quantile_sorted, ConvergenceFit, LevelStats, MIN_FIT_LEVELS};
pub use report::{Check, ConvergenceSummary, ScenarioReport, TaylorSummary};
pub use runner::{run_scenario, run_scenario_with, simulate, RunRecord};
