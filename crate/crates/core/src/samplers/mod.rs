//! Solvers `S(G, β)`: each returns a cost-sorted [`SampleSet`] whose costs
//! are recomputed locally from the assignments, never taken from a backend.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::qubo::{Penalty, QuboError, SampleSet};

mod annealing;
mod exact;
mod external;
mod random;

pub use annealing::SimulatedAnnealing;
pub use exact::{exact_alpha, exact_alpha_with, ExactOptions, ExactResult, ExactSampler};
pub use external::ExternalSampler;
pub use random::RandomBaseline;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SamplerError {
    #[error("invalid sampler configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Qubo(#[from] QuboError),
    #[error("branch-and-bound node budget of {budget} exhausted (incumbent {incumbent})")]
    BudgetExhausted { budget: u64, incumbent: usize },
    #[error("external sampler transport failure: {0}")]
    Transport(String),
    #[error("external sampler response line {line} is malformed: `{text}`")]
    MalformedResponse { line: usize, text: String },
    #[error("external sampler response line {line} has length {found}, expected {expected}")]
    LengthMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("unknown sampler `{0}`")]
    UnknownSampler(String),
}

/// Run parameters shared by all samplers. Only `reads` and `seed` matter to
/// every backend; the schedule fields are read by simulated annealing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplerConfig {
    /// Independent runs `k`.
    pub reads: usize,
    /// Metropolis sweeps per read; one sweep proposes a flip of every vertex.
    pub sweeps: usize,
    pub t_hot: f64,
    pub t_cold: f64,
    pub seed: u64,
    /// Run reads on the rayon pool. Output does not depend on this.
    pub parallel: bool,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            reads: 1000,
            sweeps: 64,
            t_hot: 2.0,
            t_cold: 0.05,
            seed: 0,
            parallel: true,
        }
    }
}

impl SamplerConfig {
    pub fn with_reads(mut self, reads: usize) -> Self {
        self.reads = reads;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), SamplerError> {
        if self.reads == 0 {
            return Err(SamplerError::InvalidConfig("reads must be at least 1".into()));
        }
        if self.sweeps == 0 {
            return Err(SamplerError::InvalidConfig("sweeps must be at least 1".into()));
        }
        if !(self.t_cold > 0.0 && self.t_hot > self.t_cold && self.t_hot.is_finite()) {
            return Err(SamplerError::InvalidConfig(format!(
                "temperatures must satisfy t_hot > t_cold > 0, got {} and {}",
                self.t_hot, self.t_cold
            )));
        }
        Ok(())
    }
}

/// The solver contract.
pub trait Sampler: Send + Sync {
    fn name(&self) -> String;

    fn sample(
        &self,
        g: &Graph,
        beta: Penalty,
        config: &SamplerConfig,
    ) -> Result<SampleSet, SamplerError>;
}

/// Seed of read `index`, independent of the order reads are executed in.
pub fn read_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(0x9E37_79B9_7F4A_7C15)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `read` for every read index, optionally in parallel, preserving order.
pub(crate) fn run_reads<F>(config: &SamplerConfig, read: F) -> Vec<Vec<bool>>
where
    F: Fn(u64) -> Vec<bool> + Sync,
{
    use rayon::prelude::*;
    let seeds = (0..config.reads as u64).map(|i| read_seed(config.seed, i));
    if config.parallel {
        seeds.collect::<Vec<_>>().into_par_iter().map(&read).collect()
    } else {
        seeds.map(read).collect()
    }
}

/// Command-line sampler choice: `sa`, `random`, `exact` or `external:<cmd>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SamplerKind {
    Annealing,
    Random,
    Exact,
    External(String),
}

impl SamplerKind {
    pub fn build(&self) -> Box<dyn Sampler> {
        match self {
            SamplerKind::Annealing => Box::new(SimulatedAnnealing),
            SamplerKind::Random => Box::new(RandomBaseline),
            SamplerKind::Exact => Box::new(ExactSampler::default()),
            SamplerKind::External(cmd) => Box::new(ExternalSampler::new(cmd.clone())),
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamplerKind::Annealing => f.write_str("sa"),
            SamplerKind::Random => f.write_str("random"),
            SamplerKind::Exact => f.write_str("exact"),
            SamplerKind::External(cmd) => write!(f, "external:{cmd}"),
        }
    }
}

impl FromStr for SamplerKind {
    type Err = SamplerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sa" => Ok(SamplerKind::Annealing),
            "random" => Ok(SamplerKind::Random),
            "exact" => Ok(SamplerKind::Exact),
            other => match other.strip_prefix("external:") {
                Some(cmd) if !cmd.trim().is_empty() => Ok(SamplerKind::External(cmd.to_string())),
                _ => Err(SamplerError::UnknownSampler(other.to_string())),
            },
        }
    }
}

impl TryFrom<String> for SamplerKind {
    type Error = SamplerError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<SamplerKind> for String {
    fn from(kind: SamplerKind) -> String {
        kind.to_string()
    }
}
