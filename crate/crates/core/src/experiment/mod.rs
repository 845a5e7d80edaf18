//! Experiment configuration, repeated runs, statistics and report export.
//!
//! Results land in `<output_dir>/<label>/`: a `method.json` manifest plus a
//! `repeat_NN/` directory per run holding `archive.csv`, `progress.jsonl`
//! and `meta.json`.

mod config;
mod report;
mod results;
mod runner;
mod stats;

pub use config::{ExperimentConfig, Method, Preset};
pub use report::{
    build_table, export_projection, export_table, format_cell, Mark, MethodSamples, StatRow, StatTable,
    WinTieLoss, PROJECTION_FILES,
};
pub use results::{select_solution, ResultMember, RunMeta, RunResult};
pub use runner::{read_arm, read_arms, run_experiment, run_on_tables, write_experiment};
pub use stats::{mean, std_dev, variance, welch_t_test, WelchResult};
