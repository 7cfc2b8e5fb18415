//! Benchmark harness: instances, experiment sweeps and report output.

use std::path::Path;

use thiserror::Error;

use crate::dimacs::DimacsError;
use crate::partition::PartitionError;
use crate::postprocess::PostProcessError;
use crate::samplers::SamplerError;

pub mod experiment;
pub mod fetch;
pub mod generators;
pub mod instances;
pub mod registry;
pub mod report;

pub use experiment::{run_experiment, ExperimentOutcome, ExperimentSpec, InstanceSpec, Mode, ResultRow};
pub use fetch::{fetch_instances, FetchRecord, FetchStatus, Manifest, ManifestEntry};
pub use generators::{erdos_renyi, paley};
pub use instances::{load_instance, LoadedInstance};
pub use report::{emit_report, partition_cost_row, PartitionCostRow, ReportFormat};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {source}")]
    Dimacs { path: String, source: DimacsError },
    #[error("unknown instance `{0}` (not a file, built-in or cached)")]
    UnknownInstance(String),
    #[error(transparent)]
    Generator(#[from] generators::GeneratorError),
    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),
    #[error("unknown report format `{0}`")]
    UnknownFormat(String),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    PostProcess(#[from] PostProcessError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }
}
