//! Simulation harness: experiment configuration, the Monte Carlo runner and
//! result emission, plus paired-data input for one-shot estimation.

pub mod config;
pub mod input;
pub mod output;
pub mod runner;

pub use config::{Cell, ExperimentConfig, CONFIG_SCHEMA, OUTPUT_DIR_ENV};
pub use input::{parse_paired_text, read_paired_file};
pub use output::{format_sig6, parse_json, to_csv, to_json, write_outputs, JsonReport};
pub use runner::{run_experiment, CellRecord, Estimator, ExperimentResult, ReplicateOutcome};
