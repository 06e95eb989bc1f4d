//! Experiment harness for the `lkgain` solver: repeated independent runs,
//! restart tours between trials, time limits and CSV result tables.

pub mod cli;
pub mod harness;
pub mod report;

pub use harness::{
    prepare_candidates, restart_tour, run_experiment, run_with_candidates, ExperimentConfig, HarnessError, RunReport,
    RunResult,
};
pub use report::{write_report, write_report_to};
