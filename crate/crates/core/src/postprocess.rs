//! Turning solver output into verified stable sets.
//!
//! [`extract_stable_set`] repairs a single assignment by deleting one endpoint
//! of every remaining edge. [`post_process`] walks a cost-sorted sample set,
//! skips samples whose annihilation number cannot beat the incumbent, and
//! re-solves the connected components of the rest with a second sampler.

use std::collections::hash_map::{Entry, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    connected_components, induced, induced_annihilation_number, induced_edge_count, is_stable_set,
    Graph, VertexSet,
};
use crate::qubo::{Penalty, Rational, SampleSet};
use crate::samplers::{read_seed, Sampler, SamplerConfig, SamplerError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PostProcessError {
    #[error("cannot post-process an empty sample set")]
    EmptySampleSet,
    #[error(transparent)]
    Sampler(#[from] SamplerError),
}

/// Deletes vertices of `x` until it is stable.
///
/// Edges of `G[x]` are visited in lexicographic order; when both endpoints
/// survive, the one with the larger remaining degree is removed (ties: the
/// higher id). Each deletion destroys at least one edge, so at least
/// `|x| - |E(G[x])|` vertices remain.
pub fn extract_stable_set(g: &Graph, x: &VertexSet) -> VertexSet {
    let view = induced(g, x).expect("vertex set must belong to the graph");
    let h = &view.subgraph;
    let mut degree = h.degrees();
    let mut alive = vec![true; h.n()];
    for (u, v) in h.edges() {
        if !(alive[u] && alive[v]) {
            continue;
        }
        let victim = if degree[u] > degree[v] { u } else { v };
        alive[victim] = false;
        for &w in h.neighbors(victim) {
            degree[w] -= 1;
        }
    }
    let local: VertexSet = (0..h.n()).filter(|&v| alive[v]).collect();
    view.to_parent(&local)
}

/// True iff `a(G[x]) > best`, i.e. the sample might still contain a stable
/// set larger than the incumbent.
pub fn screen(g: &Graph, x: &VertexSet, best: usize) -> bool {
    induced_annihilation_number(g, x) > best
}

/// What happened to one sample of the (deduplicated) set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "decision", rename_all = "snake_case")]
pub enum SampleDecision {
    /// Rejected by the annihilation screen.
    Screened { annihilation: usize },
    /// Components re-solved; `value` is the summed stable-set size.
    Recomputed {
        value: usize,
        components: usize,
        largest_component: usize,
    },
    /// Identical to an earlier sample.
    Skipped { duplicate_of: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PostProcessReport {
    /// `-cost(X_1, β)`.
    #[serde(with = "rational_text")]
    pub alpha_hat: Rational,
    pub x1_vertices: usize,
    pub x1_edges: usize,
    #[serde(rename = "alpha_hat_post")]
    pub best: usize,
    pub witness: VertexSet,
    pub recalculations: usize,
    pub largest_component: usize,
    pub beta: Penalty,
    pub beta_post: Penalty,
    /// Set in concurrent mode, where the recalculation count depends on the
    /// incumbent snapshot rather than on the sequential loop.
    pub recalculations_nondeterministic: bool,
    pub per_sample: Vec<SampleDecision>,
}

impl PostProcessReport {
    pub fn verify(&self, g: &Graph) -> bool {
        self.witness.len() == self.best && is_stable_set(g, &self.witness)
    }
}

pub(crate) mod rational_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::qubo::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Post-processing penalty for a front-end run at `beta`.
pub fn beta_post_for(beta: Penalty) -> Penalty {
    beta.post_processing_penalty()
}

struct Recomputation {
    value: usize,
    witness: VertexSet,
    components: usize,
    largest_component: usize,
}

/// Re-solves each connected component of `G[x]` and sums the stable-set
/// sizes, which is exact for a disjoint union.
fn recompute(
    g: &Graph,
    x: &VertexSet,
    beta_post: Penalty,
    s_post: &dyn Sampler,
    post_config: &SamplerConfig,
    sample_index: usize,
) -> Result<Recomputation, SamplerError> {
    let view = induced(g, x).expect("sample belongs to the graph");
    let components = connected_components(&view.subgraph);
    let largest_component = components.iter().map(VertexSet::len).max().unwrap_or(0);
    let mut witness = Vec::new();
    for (j, component) in components.iter().enumerate() {
        let parent = view.to_parent(component);
        if parent.len() == 1 {
            witness.extend(parent.iter());
            continue;
        }
        let sub = induced(g, &parent).expect("component belongs to the graph");
        let config = SamplerConfig {
            seed: read_seed(post_config.seed, ((sample_index as u64) << 32) | j as u64),
            ..post_config.clone()
        };
        let samples = s_post.sample(&sub.subgraph, beta_post, &config)?;
        let local = samples
            .best()
            .map(|s| s.vertex_set())
            .unwrap_or_else(|| VertexSet::new([]));
        let repaired = extract_stable_set(&sub.subgraph, &local);
        let local_best = if repaired.is_empty() {
            // an empty answer still leaves one vertex as a valid stable set
            VertexSet::new([0])
        } else {
            repaired
        };
        witness.extend(sub.to_parent(&local_best).iter());
    }
    let witness = VertexSet::new(witness);
    Ok(Recomputation {
        value: witness.len(),
        witness,
        components: components.len(),
        largest_component,
    })
}

struct Prepared {
    alpha_hat: Rational,
    x1_vertices: usize,
    x1_edges: usize,
    best: usize,
    witness: VertexSet,
    largest_component: usize,
    unique: Vec<VertexSet>,
    origin: Vec<Option<usize>>,
}

fn prepare(g: &Graph, samples: &SampleSet) -> Result<Prepared, PostProcessError> {
    let first = samples.best().ok_or(PostProcessError::EmptySampleSet)?;
    let x1 = first.vertex_set();
    let x1_edges = induced_edge_count(g, &x1);
    let witness = extract_stable_set(g, &x1);
    let x1_view = induced(g, &x1).expect("sample belongs to the graph");
    let largest_component = connected_components(&x1_view.subgraph)
        .iter()
        .map(VertexSet::len)
        .max()
        .unwrap_or(0);

    let mut seen: HashMap<&[bool], usize> = HashMap::new();
    let mut unique = Vec::new();
    let mut origin = Vec::with_capacity(samples.len());
    for sample in samples.samples() {
        match seen.entry(sample.assignment.as_slice()) {
            Entry::Occupied(e) => origin.push(Some(*e.get())),
            Entry::Vacant(e) => {
                e.insert(unique.len());
                unique.push(sample.vertex_set());
                origin.push(None);
            }
        }
    }

    Ok(Prepared {
        alpha_hat: -first.cost,
        x1_vertices: x1.len(),
        x1_edges,
        best: witness.len(),
        witness,
        largest_component,
        unique,
        origin,
    })
}

/// Sequential post-processing; the incumbent tightens as the loop advances.
pub fn post_process(
    g: &Graph,
    samples: &SampleSet,
    beta_post: Penalty,
    s_post: &dyn Sampler,
    post_config: &SamplerConfig,
) -> Result<PostProcessReport, PostProcessError> {
    let prep = prepare(g, samples)?;
    let mut best = prep.best;
    let mut witness = prep.witness.clone();
    let mut largest_component = prep.largest_component;
    let mut recalculations = 0;
    let mut unique_decisions = Vec::with_capacity(prep.unique.len());

    for (i, x) in prep.unique.iter().enumerate() {
        let annihilation = induced_annihilation_number(g, x);
        if annihilation <= best {
            unique_decisions.push(SampleDecision::Screened { annihilation });
            continue;
        }
        let r = recompute(g, x, beta_post, s_post, post_config, i)?;
        recalculations += 1;
        largest_component = largest_component.max(r.largest_component);
        unique_decisions.push(SampleDecision::Recomputed {
            value: r.value,
            components: r.components,
            largest_component: r.largest_component,
        });
        if r.value > best {
            best = r.value;
            witness = r.witness;
        }
    }

    Ok(finish(prep, best, witness, largest_component, recalculations, unique_decisions, samples, beta_post, false))
}

/// Screens every sample against the initial incumbent and recomputes the
/// survivors in parallel. The final `best` equals the sequential one; the
/// recalculation count can be larger.
pub fn post_process_concurrent(
    g: &Graph,
    samples: &SampleSet,
    beta_post: Penalty,
    s_post: &dyn Sampler,
    post_config: &SamplerConfig,
) -> Result<PostProcessReport, PostProcessError> {
    let prep = prepare(g, samples)?;
    let snapshot = prep.best;
    let results: Vec<Result<(SampleDecision, Option<Recomputation>), SamplerError>> = prep
        .unique
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let annihilation = induced_annihilation_number(g, x);
            if annihilation <= snapshot {
                return Ok((SampleDecision::Screened { annihilation }, None));
            }
            let r = recompute(g, x, beta_post, s_post, post_config, i)?;
            let decision = SampleDecision::Recomputed {
                value: r.value,
                components: r.components,
                largest_component: r.largest_component,
            };
            Ok((decision, Some(r)))
        })
        .collect();

    let mut best = prep.best;
    let mut witness = prep.witness.clone();
    let mut largest_component = prep.largest_component;
    let mut recalculations = 0;
    let mut unique_decisions = Vec::with_capacity(results.len());
    for result in results {
        let (decision, r) = result?;
        if let Some(r) = r {
            recalculations += 1;
            largest_component = largest_component.max(r.largest_component);
            if r.value > best {
                best = r.value;
                witness = r.witness;
            }
        }
        unique_decisions.push(decision);
    }

    Ok(finish(prep, best, witness, largest_component, recalculations, unique_decisions, samples, beta_post, true))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    prep: Prepared,
    best: usize,
    witness: VertexSet,
    largest_component: usize,
    recalculations: usize,
    unique_decisions: Vec<SampleDecision>,
    samples: &SampleSet,
    beta_post: Penalty,
    nondeterministic: bool,
) -> PostProcessReport {
    let mut unique_iter = unique_decisions.into_iter();
    let per_sample = prep
        .origin
        .iter()
        .map(|o| match o {
            Some(dup) => SampleDecision::Skipped { duplicate_of: *dup },
            None => unique_iter.next().expect("one decision per unique sample"),
        })
        .collect();
    PostProcessReport {
        alpha_hat: prep.alpha_hat,
        x1_vertices: prep.x1_vertices,
        x1_edges: prep.x1_edges,
        best,
        witness,
        recalculations,
        largest_component,
        beta: samples.beta(),
        beta_post,
        recalculations_nondeterministic: nondeterministic,
        per_sample,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::{ExactSampler, SimulatedAnnealing};

    fn star_plus_isolated() -> (Graph, VertexSet) {
        // vertex 0 adjacent to 1..=5, vertices 6..30 isolated
        let g = Graph::from_edges(30, (1..=5).map(|v| (0, v))).unwrap();
        (g, VertexSet::new(0..30))
    }

    #[test]
    fn extraction_on_k2() {
        let g = Graph::complete(2);
        let s = extract_stable_set(&g, &VertexSet::new([0, 1]));
        assert_eq!(s, VertexSet::new([0]));
    }

    #[test]
    fn extraction_keeps_stable_input() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let x = VertexSet::new([0, 2]);
        assert_eq!(extract_stable_set(&g, &x), x);
        assert!(extract_stable_set(&g, &VertexSet::new([])).is_empty());
    }

    #[test]
    fn extraction_removes_the_star_centre() {
        let (g, x) = star_plus_isolated();
        assert_eq!(induced_edge_count(&g, &x), 5);
        let s = extract_stable_set(&g, &x);
        assert_eq!(s.len(), 29);
        assert!(!s.contains(0));
    }

    #[test]
    fn screening_cases() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(!screen(&g, &VertexSet::new([0, 2]), 2));
        assert!(screen(&g, &VertexSet::new([0, 1]), 0));
        assert!(!screen(&g, &VertexSet::new([]), 0));
    }

    fn sample_set(g: &Graph, beta: Penalty, sets: &[&[usize]]) -> SampleSet {
        let assignments = sets
            .iter()
            .map(|s| VertexSet::new(s.iter().copied()).indicator(g.n()))
            .collect::<Vec<_>>();
        SampleSet::from_assignments(g, beta, assignments.len(), assignments)
    }

    #[test]
    fn stable_samples_need_no_recalculation() {
        let g = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let samples = sample_set(&g, Penalty::half(), &[&[0, 2], &[1, 3], &[4], &[0, 2]]);
        let report = post_process(
            &g,
            &samples,
            Penalty::half(),
            &ExactSampler::default(),
            &SamplerConfig::default().with_reads(1),
        )
        .unwrap();
        assert_eq!(report.best, 2);
        assert_eq!(report.recalculations, 0);
        assert!(report.verify(&g));
        assert_eq!(report.largest_component, 1);
        let skipped = report.per_sample.iter().filter(|d| matches!(d, SampleDecision::Skipped { .. }));
        assert_eq!(skipped.count(), 1);
    }

    #[test]
    fn infeasible_first_sample_is_recomputed() {
        // two disjoint triangles plus an extra vertex joined to every vertex
        let mut edges = vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)];
        edges.extend((0..6).map(|v| (v, 6)));
        let g = Graph::from_edges(7, edges).unwrap();
        let beta = Penalty::ratio(1, 10).unwrap();
        let samples = sample_set(&g, beta, &[&[0, 1, 2, 3, 4, 5]]);
        let report = post_process(
            &g,
            &samples,
            beta_post_for(beta),
            &ExactSampler::default(),
            &SamplerConfig::default().with_reads(1),
        )
        .unwrap();
        assert_eq!(report.x1_vertices, 6);
        assert_eq!(report.x1_edges, 6);
        assert_eq!(report.best, 2);
        assert_eq!(report.recalculations, 1);
        assert_eq!(report.largest_component, 3);
        assert_eq!(report.beta_post, Penalty::half());
        assert!(report.verify(&g));
    }

    #[test]
    fn concurrent_matches_sequential_best() {
        let g = Graph::from_predicate(24, |u, v| (u * v + u + v) % 4 == 1);
        let beta = Penalty::ratio(1, 8).unwrap();
        let config = SamplerConfig::default().with_reads(20).with_seed(3);
        let samples = SimulatedAnnealing.sample(&g, beta, &config).unwrap();
        let post = SamplerConfig::default().with_reads(10);
        let a = post_process(&g, &samples, Penalty::half(), &SimulatedAnnealing, &post).unwrap();
        let b =
            post_process_concurrent(&g, &samples, Penalty::half(), &SimulatedAnnealing, &post)
                .unwrap();
        assert_eq!(a.best, b.best);
        assert!(b.recalculations >= a.recalculations);
        assert!(a.verify(&g) && b.verify(&g));
        assert!(b.recalculations_nondeterministic);
    }

    #[test]
    fn empty_set_is_an_error() {
        let g = Graph::empty(2);
        let empty = SampleSet::from_assignments(&g, Penalty::half(), 1, vec![]);
        assert_eq!(
            post_process(&g, &empty, Penalty::half(), &ExactSampler::default(), &SamplerConfig::default()),
            Err(PostProcessError::EmptySampleSet)
        );
    }

    #[test]
    fn report_json_names() {
        let g = Graph::complete(2);
        let samples = sample_set(&g, Penalty::half(), &[&[0]]);
        let report = post_process(
            &g,
            &samples,
            Penalty::half(),
            &ExactSampler::default(),
            &SamplerConfig::default().with_reads(1),
        )
        .unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["alpha_hat"], "1");
        assert_eq!(json["alpha_hat_post"], 1);
        assert_eq!(json["x1_vertices"], 1);
        let back: PostProcessReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, report);
    }
}
