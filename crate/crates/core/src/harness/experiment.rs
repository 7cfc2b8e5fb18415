use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::instances::load_instance;
use super::registry::known_alpha;
use super::report::format_density;
use super::HarnessError;
use crate::graph::Graph;
use crate::partition::{solve_with_partitioning, PartitionSolveConfig};
use crate::postprocess::{beta_post_for, post_process};
use crate::qubo::{format_rational, Penalty};
use crate::samplers::{read_seed, SamplerConfig, SamplerKind};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Direct,
    Partitioned,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Direct => "direct",
            Mode::Partitioned => "partitioned",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    /// File path, built-in name or cached instance name.
    pub name: String,
    #[serde(default)]
    pub complement: bool,
}

pub fn default_betas() -> Vec<Penalty> {
    [(1, 10), (1, 8), (1, 6), (1, 4), (1, 2), (1, 1), (10, 1), (100, 1)]
        .into_iter()
        .map(|(p, q)| Penalty::ratio(p, q).expect("positive"))
        .collect()
}

fn default_sampler() -> SamplerKind {
    SamplerKind::Annealing
}

fn default_post_config() -> SamplerConfig {
    SamplerConfig::default().with_reads(100)
}

/// A β sweep over a list of instances, read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub instances: Vec<InstanceSpec>,
    #[serde(default = "default_betas")]
    pub betas: Vec<Penalty>,
    #[serde(default = "default_sampler")]
    pub sampler: SamplerKind,
    /// Front-end sampler settings; the seed field is ignored in favour of
    /// [`ExperimentSpec::seed`].
    #[serde(default)]
    pub config: SamplerConfig,
    #[serde(default = "default_sampler")]
    pub post_sampler: SamplerKind,
    #[serde(default = "default_post_config")]
    pub post_config: SamplerConfig,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn new(instances: Vec<InstanceSpec>) -> Self {
        Self {
            instances,
            betas: default_betas(),
            sampler: default_sampler(),
            config: SamplerConfig::default(),
            post_sampler: default_sampler(),
            post_config: default_post_config(),
            mode: Mode::Direct,
            seed: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let spec: Self = serde_json::from_str(text).map_err(|e| HarnessError::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.instances.is_empty() {
            return Err(HarnessError::InvalidSpec("no instances".into()));
        }
        if self.betas.is_empty() {
            return Err(HarnessError::InvalidSpec("beta list is empty".into()));
        }
        self.config
            .validate()
            .and_then(|_| self.post_config.validate())
            .map_err(|e| HarnessError::InvalidSpec(e.to_string()))
    }
}

/// One (instance, β) cell of a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRow {
    pub instance: String,
    pub complement: bool,
    pub n: usize,
    pub m: usize,
    pub density: String,
    pub alpha_known: Option<usize>,
    pub mode: Mode,
    pub sampler: String,
    pub beta: Penalty,
    pub beta_post: Penalty,
    /// `-cost(X_1, β)` as `p/q`; direct mode only.
    pub alpha_hat: Option<String>,
    pub x1_vertices: Option<usize>,
    pub x1_edges: Option<usize>,
    pub alpha_hat_post: Option<usize>,
    pub recalculations: Option<usize>,
    pub largest_component: Option<usize>,
    pub partitions_solved: Option<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFailure {
    pub instance: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutcome {
    pub rows: Vec<ResultRow>,
    pub failures: Vec<InstanceFailure>,
}

impl ExperimentOutcome {
    pub fn has_failures(&self) -> bool {
        !self.failures.is_empty() || self.rows.iter().any(|r| r.error.is_some())
    }
}

fn empty_row(name: &str, complement: bool, g: &Graph, spec: &ExperimentSpec, beta: Penalty) -> ResultRow {
    ResultRow {
        instance: name.to_string(),
        complement,
        n: g.n(),
        m: g.m(),
        density: format_density(g.n(), g.m()),
        alpha_known: known_alpha(name, complement),
        mode: spec.mode,
        sampler: spec.sampler.to_string(),
        beta,
        beta_post: beta_post_for(beta),
        alpha_hat: None,
        x1_vertices: None,
        x1_edges: None,
        alpha_hat_post: None,
        recalculations: None,
        largest_component: None,
        partitions_solved: None,
        error: None,
    }
}

fn run_cell(g: &Graph, spec: &ExperimentSpec, beta: Penalty, seed: u64, row: &mut ResultRow) -> Result<(), HarnessError> {
    let sampler = spec.sampler.build();
    let post_sampler = spec.post_sampler.build();
    let config = SamplerConfig {
        seed,
        ..spec.config.clone()
    };
    let post_config = SamplerConfig {
        seed: read_seed(seed, 1),
        ..spec.post_config.clone()
    };
    match spec.mode {
        Mode::Direct => {
            let samples = sampler.sample(g, beta, &config)?;
            let report = post_process(g, &samples, row.beta_post, post_sampler.as_ref(), &post_config)?;
            if !report.verify(g) {
                row.error = Some("post-processing witness failed verification".into());
                return Ok(());
            }
            row.alpha_hat = Some(format_rational(&report.alpha_hat));
            row.x1_vertices = Some(report.x1_vertices);
            row.x1_edges = Some(report.x1_edges);
            row.alpha_hat_post = Some(report.best);
            row.recalculations = Some(report.recalculations);
            row.largest_component = Some(report.largest_component);
        }
        Mode::Partitioned => {
            let partition_config = PartitionSolveConfig {
                sample: config,
                post: post_config,
                ordering: None,
                concurrent: false,
            };
            let report = solve_with_partitioning(
                g,
                beta,
                row.beta_post,
                sampler.as_ref(),
                post_sampler.as_ref(),
                &partition_config,
            )?;
            if !report.verify(g) {
                row.error = Some("partitioning witness failed verification".into());
                return Ok(());
            }
            row.alpha_hat_post = Some(report.best);
            row.partitions_solved = Some(report.partitions_solved);
        }
    }
    Ok(())
}

/// Runs every (instance, β) cell in spec order. An unreadable instance is
/// recorded and skipped; a sampler failure marks its row.
pub fn run_experiment(spec: &ExperimentSpec, cache_dir: &Path) -> Result<ExperimentOutcome, HarnessError> {
    spec.validate()?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (i, instance) in spec.instances.iter().enumerate() {
        let loaded = match load_instance(&instance.name, instance.complement, cache_dir) {
            Ok(l) => l,
            Err(e) => {
                log::error!("{}: {e}", instance.name);
                failures.push(InstanceFailure {
                    instance: instance.name.clone(),
                    error: e.to_string(),
                });
                continue;
            }
        };
        for (j, &beta) in spec.betas.iter().enumerate() {
            log::info!("{} beta={beta}", loaded.name);
            let seed = read_seed(spec.seed, ((i as u64) << 32) | j as u64);
            let mut row = empty_row(&loaded.name, loaded.complemented, &loaded.graph, spec, beta);
            if let Err(e) = run_cell(&loaded.graph, spec, beta, seed, &mut row) {
                row.error = Some(e.to_string());
            }
            rows.push(row);
        }
    }
    Ok(ExperimentOutcome { rows, failures })
}
