use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{run_reads, Sampler, SamplerConfig, SamplerError};
use crate::graph::Graph;
use crate::qubo::{CostScale, Penalty, SampleSet};

/// Single-flip Metropolis annealing on `cost(x, β)`.
///
/// Every read starts from the all-zeros state, follows a geometric schedule
/// from `t_hot` to `t_cold` (one temperature per sweep) and reports the
/// lowest-cost state it visited. Cost differences are tracked exactly in the
/// integer scale of β; only the acceptance test converts to `f64`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SimulatedAnnealing;

impl Sampler for SimulatedAnnealing {
    fn name(&self) -> String {
        "sa".into()
    }

    fn sample(
        &self,
        g: &Graph,
        beta: Penalty,
        config: &SamplerConfig,
    ) -> Result<SampleSet, SamplerError> {
        config.validate()?;
        let scale = beta.scale();
        let assignments = run_reads(config, |seed| anneal_once(g, scale, config, seed));
        Ok(SampleSet::from_assignments(g, beta, config.reads, assignments))
    }
}

fn temperature(config: &SamplerConfig, sweep: usize) -> f64 {
    if config.sweeps == 1 {
        return config.t_cold;
    }
    let progress = sweep as f64 / (config.sweeps - 1) as f64;
    config.t_hot * (config.t_cold / config.t_hot).powf(progress)
}

fn anneal_once(g: &Graph, scale: CostScale, config: &SamplerConfig, seed: u64) -> Vec<bool> {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = vec![false; n];
    let mut selected_neighbors = vec![0usize; n];
    let mut current = 0i128;

    // best state = snapshot plus the flips journaled since it was taken
    let mut best = 0i128;
    let mut best_state = state.clone();
    let mut journal: Vec<usize> = Vec::new();

    for sweep in 0..config.sweeps {
        let t = temperature(config, sweep);
        for v in 0..n {
            let adding = !state[v];
            let delta = scale.flip_delta(adding, selected_neighbors[v]);
            let accept = delta <= 0 || rng.gen::<f64>() < (-scale.to_f64(delta) / t).exp();
            if !accept {
                continue;
            }
            state[v] = adding;
            for &u in g.neighbors(v) {
                if adding {
                    selected_neighbors[u] += 1;
                } else {
                    selected_neighbors[u] -= 1;
                }
            }
            current += delta;
            journal.push(v);
            if current < best {
                best = current;
                for &w in &journal {
                    best_state[w] = !best_state[w];
                }
                journal.clear();
            }
        }
    }
    best_state
}
