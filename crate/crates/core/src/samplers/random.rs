use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{run_reads, Sampler, SamplerConfig, SamplerError};
use crate::graph::Graph;
use crate::qubo::{Penalty, SampleSet};

/// Uniformly random assignments; a control for comparing samplers.
#[derive(Debug, Clone, Copy, Default)]
pub struct RandomBaseline;

impl Sampler for RandomBaseline {
    fn name(&self) -> String {
        "random".into()
    }

    fn sample(
        &self,
        g: &Graph,
        beta: Penalty,
        config: &SamplerConfig,
    ) -> Result<SampleSet, SamplerError> {
        config.validate()?;
        let n = g.n();
        let assignments = run_reads(config, |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n).map(|_| rng.gen::<bool>()).collect()
        });
        Ok(SampleSet::from_assignments(g, beta, config.reads, assignments))
    }
}
