//! Experiment orchestration: closed-form bounds, seeded trial fan-out,
//! comparison tables and report files.
//!
//! An [`ExperimentConfig`] fully determines its output; reports differ between
//! identical runs only in their `timing` section.

mod bounds;
mod compare;
mod experiment;
mod render;

pub use bounds::{theoretical_bounds, Bounds, TradeoffExponents};
pub use compare::{compare_attacks, ComparisonRow, ComparisonTable};
pub use experiment::{
    report_path, run_attack, run_experiment, run_trial, wilson_interval, write_report, ConstructionSpec,
    ExperimentConfig, ExperimentReport, Summary, Timing, TrialRecord, OUT_DIR_ENV, QUERY_CONVENTION,
    REPORT_SCHEMA_VERSION,
};
pub use render::render_report;
