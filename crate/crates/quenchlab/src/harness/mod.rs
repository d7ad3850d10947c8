//! Experiment configuration, orchestration, run manifests and the command
//! line interface.

mod cli;
mod config;
mod manifest;
mod run;

pub use cli::cli;
pub use config::{DatumConfig, EstimateConfig, ExperimentConfig, OutputConfig, ProblemConfig};
pub use manifest::{hash_file, sha256_hex, FileEntry, RunManifest};
pub use run::{
    build_context, collate_reports, estimate_field, run_experiment, EstimateContext,
    EstimateOptions,
};
