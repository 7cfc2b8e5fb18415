//! CH-partitioning for instances too large to sample directly.
//!
//! The partitions live in the complement graph Ḡ: the core of entry `i` is a
//! single vertex `v_i` and its halo is a set of Ḡ-neighbours. Ḡ is never
//! built; its adjacency is read off `g` as non-adjacency.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    complement_degree_ascending_order, induced, induced_annihilation_number, is_stable_set, Graph,
    Vertex, VertexSet,
};
use crate::postprocess::{post_process, PostProcessError};
use crate::qubo::Penalty;
use crate::samplers::{exact_alpha, read_seed, Sampler, SamplerConfig, SamplerError};

/// Largest graph accepted by [`verify_partition_covering`].
pub const COVERING_CHECK_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("ordering is not a permutation of 0..{n}")]
    NotAPermutation { n: usize },
    #[error("covering check needs n <= {limit}, got {n}")]
    TooLarge { n: usize, limit: usize },
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    PostProcess(#[from] PostProcessError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `H_i = N_Ḡ(v_i)`.
    Regular,
    /// `H_i = N_Ḡ(v_i) \ {v_1, ..., v_i}`.
    Simple,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionEntry {
    pub core: Vertex,
    pub halo: VertexSet,
}

impl PartitionEntry {
    pub fn size(&self) -> usize {
        1 + self.halo.len()
    }

    /// `C_i ∪ H_i`.
    pub fn members(&self) -> VertexSet {
        self.halo.union(&VertexSet::new([self.core]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChPartition {
    pub variant: Variant,
    pub ordering: Vec<Vertex>,
    pub entries: Vec<PartitionEntry>,
}

/// Produces partition entries one at a time in ordering sequence.
pub struct PartitionEntries<'g> {
    g: &'g Graph,
    variant: Variant,
    ordering: Vec<Vertex>,
    removed: Vec<bool>,
    next: usize,
}

impl<'g> PartitionEntries<'g> {
    pub fn new(g: &'g Graph, ordering: Vec<Vertex>, variant: Variant) -> Result<Self, PartitionError> {
        check_permutation(g.n(), &ordering)?;
        Ok(Self {
            g,
            variant,
            removed: vec![false; g.n()],
            ordering,
            next: 0,
        })
    }
}

impl Iterator for PartitionEntries<'_> {
    type Item = PartitionEntry;

    fn next(&mut self) -> Option<PartitionEntry> {
        let v = *self.ordering.get(self.next)?;
        self.next += 1;
        self.removed[v] = true;
        let removed = &self.removed;
        let halo = match self.variant {
            Variant::Regular => self.g.non_neighbors(v).collect(),
            Variant::Simple => self.g.non_neighbors(v).filter(|&u| !removed[u]).collect(),
        };
        Some(PartitionEntry { core: v, halo })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.ordering.len() - self.next;
        (left, Some(left))
    }
}

fn check_permutation(n: usize, ordering: &[Vertex]) -> Result<(), PartitionError> {
    let mut seen = vec![false; n];
    if ordering.len() != n {
        return Err(PartitionError::NotAPermutation { n });
    }
    for &v in ordering {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(PartitionError::NotAPermutation { n });
        }
    }
    Ok(())
}

/// Degree-ascending in Ḡ, ties by id.
pub fn default_ordering(g: &Graph) -> Vec<Vertex> {
    complement_degree_ascending_order(g)
}

pub fn simple_ch_partition(g: &Graph, ordering: &[Vertex]) -> Result<ChPartition, PartitionError> {
    build(g, ordering, Variant::Simple)
}

pub fn regular_ch_partition(g: &Graph, ordering: &[Vertex]) -> Result<ChPartition, PartitionError> {
    build(g, ordering, Variant::Regular)
}

fn build(g: &Graph, ordering: &[Vertex], variant: Variant) -> Result<ChPartition, PartitionError> {
    let entries = PartitionEntries::new(g, ordering.to_vec(), variant)?.collect();
    Ok(ChPartition {
        variant,
        ordering: ordering.to_vec(),
        entries,
    })
}

/// `max_i |C_i| + |H_i|`; zero for the empty graph.
pub fn partition_cost(p: &ChPartition) -> usize {
    p.entries.iter().map(PartitionEntry::size).max().unwrap_or(0)
}

/// Cost of the regular partition, `Δ(Ḡ) + 1`, from degrees of `g` alone.
pub fn regular_partition_cost(g: &Graph) -> usize {
    (0..g.n()).map(|v| g.n() - g.degree(v)).max().unwrap_or(0)
}

/// Cost of the simple partition without storing halos.
pub fn simple_partition_cost(g: &Graph, ordering: &[Vertex]) -> Result<usize, PartitionError> {
    Ok(PartitionEntries::new(g, ordering.to_vec(), Variant::Simple)?
        .map(|e| e.size())
        .max()
        .unwrap_or(0))
}

/// Checks exhaustively that the best stable set among the parts is as large
/// as the best stable set of `g`.
pub fn verify_partition_covering(g: &Graph, p: &ChPartition) -> Result<bool, PartitionError> {
    if g.n() > COVERING_CHECK_LIMIT {
        return Err(PartitionError::TooLarge {
            n: g.n(),
            limit: COVERING_CHECK_LIMIT,
        });
    }
    let alpha = exact_alpha(g)?.alpha;
    let mut best = 0;
    for entry in &p.entries {
        let part = induced(g, &entry.members()).expect("entry belongs to the graph");
        best = best.max(exact_alpha(&part.subgraph)?.alpha);
    }
    Ok(best == alpha)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PartitionSolveConfig {
    /// Front-end sampler settings, reused for every part.
    pub sample: SamplerConfig,
    /// Settings for component re-solves inside post-processing.
    pub post: SamplerConfig,
    /// Vertex order; `None` uses [`default_ordering`].
    pub ordering: Option<Vec<Vertex>>,
    /// Solve parts on the rayon pool with a shared incumbent.
    pub concurrent: bool,
}

impl Default for PartitionSolveConfig {
    fn default() -> Self {
        Self {
            sample: SamplerConfig::default(),
            post: SamplerConfig::default().with_reads(100),
            ordering: None,
            concurrent: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionRecord {
    pub index: usize,
    pub core: Vertex,
    pub size: usize,
    pub annihilation: usize,
    pub pruned: bool,
    pub value: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSolveReport {
    pub best: usize,
    pub witness: VertexSet,
    pub partitions_solved: usize,
    pub partitions_total: usize,
    pub beta: Penalty,
    pub beta_post: Penalty,
    pub solved_count_nondeterministic: bool,
    pub per_partition: Vec<PartitionRecord>,
}

impl PartitionSolveReport {
    pub fn verify(&self, g: &Graph) -> bool {
        self.witness.len() == self.best && is_stable_set(g, &self.witness)
    }
}

struct PartOutcome {
    value: usize,
    witness: VertexSet,
}

#[allow(clippy::too_many_arguments)]
fn solve_part(
    g: &Graph,
    members: &VertexSet,
    index: usize,
    beta: Penalty,
    beta_post: Penalty,
    s: &dyn Sampler,
    s_post: &dyn Sampler,
    config: &PartitionSolveConfig,
) -> Result<PartOutcome, PartitionError> {
    let part = induced(g, members).expect("entry belongs to the graph");
    let sample_config = SamplerConfig {
        seed: read_seed(config.sample.seed, index as u64),
        ..config.sample.clone()
    };
    let post_config = SamplerConfig {
        seed: read_seed(config.post.seed, index as u64),
        ..config.post.clone()
    };
    let samples = s.sample(&part.subgraph, beta, &sample_config)?;
    let report = post_process(&part.subgraph, &samples, beta_post, s_post, &post_config)?;
    Ok(PartOutcome {
        value: report.best,
        witness: part.to_parent(&report.witness),
    })
}

/// Samples every part of the simple partition whose annihilation number
/// exceeds the incumbent, post-processes it, and keeps the best stable set.
pub fn solve_with_partitioning(
    g: &Graph,
    beta: Penalty,
    beta_post: Penalty,
    s: &dyn Sampler,
    s_post: &dyn Sampler,
    config: &PartitionSolveConfig,
) -> Result<PartitionSolveReport, PartitionError> {
    let ordering = config.ordering.clone().unwrap_or_else(|| default_ordering(g));
    let entries = PartitionEntries::new(g, ordering, Variant::Simple)?;
    if config.concurrent {
        return solve_concurrent(g, entries, beta, beta_post, s, s_post, config);
    }

    let mut best = 0;
    let mut witness = VertexSet::new([]);
    let mut per_partition = Vec::with_capacity(g.n());
    for (index, entry) in entries.enumerate() {
        let members = entry.members();
        let annihilation = induced_annihilation_number(g, &members);
        let mut record = PartitionRecord {
            index,
            core: entry.core,
            size: members.len(),
            annihilation,
            pruned: annihilation <= best,
            value: None,
        };
        if !record.pruned {
            let outcome = solve_part(g, &members, index, beta, beta_post, s, s_post, config)?;
            record.value = Some(outcome.value);
            if outcome.value > best {
                best = outcome.value;
                witness = outcome.witness;
            }
        }
        per_partition.push(record);
    }
    Ok(finish(g, best, witness, per_partition, beta, beta_post, false))
}

fn solve_concurrent(
    g: &Graph,
    entries: PartitionEntries<'_>,
    beta: Penalty,
    beta_post: Penalty,
    s: &dyn Sampler,
    s_post: &dyn Sampler,
    config: &PartitionSolveConfig,
) -> Result<PartitionSolveReport, PartitionError> {
    let entries: Vec<PartitionEntry> = entries.collect();
    let incumbent = AtomicUsize::new(0);
    let best_witness = Mutex::new(VertexSet::new([]));
    let records: Result<Vec<PartitionRecord>, PartitionError> = entries
        .par_iter()
        .enumerate()
        .map(|(index, entry)| {
            let members = entry.members();
            let annihilation = induced_annihilation_number(g, &members);
            let pruned = annihilation <= incumbent.load(Ordering::SeqCst);
            let mut value = None;
            if !pruned {
                let outcome = solve_part(g, &members, index, beta, beta_post, s, s_post, config)?;
                let mut guard = best_witness.lock().expect("witness lock");
                if outcome.value > guard.len() {
                    *guard = outcome.witness;
                }
                incumbent.fetch_max(outcome.value, Ordering::SeqCst);
                value = Some(outcome.value);
            }
            Ok(PartitionRecord {
                index,
                core: entry.core,
                size: members.len(),
                annihilation,
                pruned,
                value,
            })
        })
        .collect();
    let witness = best_witness.into_inner().expect("witness lock");
    Ok(finish(g, witness.len(), witness, records?, beta, beta_post, true))
}

fn finish(
    g: &Graph,
    best: usize,
    witness: VertexSet,
    per_partition: Vec<PartitionRecord>,
    beta: Penalty,
    beta_post: Penalty,
    nondeterministic: bool,
) -> PartitionSolveReport {
    debug_assert!(is_stable_set(g, &witness));
    PartitionSolveReport {
        best,
        witness,
        partitions_solved: per_partition.iter().filter(|r| !r.pruned).count(),
        partitions_total: g.n(),
        beta,
        beta_post,
        solved_count_nondeterministic: nondeterministic,
        per_partition,
    }
}
