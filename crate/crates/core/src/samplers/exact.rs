use super::{Sampler, SamplerConfig, SamplerError};
use crate::graph::{annihilation_number_from_degrees, Graph, VertexSet};
use crate::qubo::{exact_qubo_optimum, Penalty, SampleSet};

/// A maximum stable set and its size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub alpha: usize,
    pub witness: VertexSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactOptions {
    /// Graphs with at most this many vertices are solved by subset enumeration.
    pub enumeration_limit: usize,
    /// Abort branch-and-bound after this many nodes.
    pub node_budget: Option<u64>,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            enumeration_limit: 20,
            node_budget: None,
        }
    }
}

pub fn exact_alpha(g: &Graph) -> Result<ExactResult, SamplerError> {
    exact_alpha_with(g, &ExactOptions::default())
}

pub fn exact_alpha_with(g: &Graph, options: &ExactOptions) -> Result<ExactResult, SamplerError> {
    if g.n() <= options.enumeration_limit.min(26) {
        return Ok(enumerate(g));
    }
    let mut search = BranchAndBound::new(g, options.node_budget);
    let all = Bits::full(g.n());
    let mut chosen = Vec::new();
    if search.run(&all, &mut chosen).is_err() {
        return Err(SamplerError::BudgetExhausted {
            budget: options.node_budget.unwrap_or(u64::MAX),
            incumbent: search.best.len(),
        });
    }
    Ok(ExactResult {
        alpha: search.best.len(),
        witness: VertexSet::new(search.best),
    })
}

/// Largest stable subset by dynamic programming over all vertex masks; the
/// numerically smallest mask wins ties.
fn enumerate(g: &Graph) -> ExactResult {
    let n = g.n();
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &u| acc | (1 << u)))
        .collect();
    let total = 1usize << n;
    let mut stable = vec![false; total];
    stable[0] = true;
    let mut best_mask = 0u32;
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        stable[mask] = stable[rest] && adj[low] & rest as u32 == 0;
        if stable[mask] && (mask as u32).count_ones() > best_mask.count_ones() {
            best_mask = mask as u32;
        }
    }
    ExactResult {
        alpha: best_mask.count_ones() as usize,
        witness: VertexSet::new((0..n).filter(|&v| best_mask & (1 << v) != 0)),
    }
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut b = Self::empty(n);
        for v in 0..n {
            b.insert(v);
        }
        b
    }

    fn insert(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    fn remove(&mut self, v: usize) {
        self.0[v / 64] &= !(1 << (v % 64));
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and_count(&self, other: &Bits) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn minus(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }
}

struct Interrupted;

struct BranchAndBound {
    adj: Vec<Bits>,
    best: Vec<usize>,
    nodes: u64,
    budget: Option<u64>,
}

impl BranchAndBound {
    fn new(g: &Graph, budget: Option<u64>) -> Self {
        let adj = (0..g.n())
            .map(|v| {
                let mut b = Bits::empty(g.n());
                for &u in g.neighbors(v) {
                    b.insert(u);
                }
                b
            })
            .collect();
        Self {
            adj,
            best: Vec::new(),
            nodes: 0,
            budget,
        }
    }

    fn run(&mut self, candidates: &Bits, chosen: &mut Vec<usize>) -> Result<(), Interrupted> {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return Err(Interrupted);
        }
        if candidates.is_empty() {
            if chosen.len() > self.best.len() {
                self.best = chosen.clone();
            }
            return Ok(());
        }

        let mut degrees = Vec::new();
        let mut pivot = (0usize, usize::MAX);
        for v in candidates.iter() {
            let d = self.adj[v].and_count(candidates);
            if pivot.1 == usize::MAX || d > pivot.1 {
                pivot = (v, d);
            }
            degrees.push(d);
        }
        let (v, max_degree) = pivot;
        if max_degree == 0 {
            if chosen.len() + degrees.len() > self.best.len() {
                self.best = chosen.iter().copied().chain(candidates.iter()).collect();
            }
            return Ok(());
        }
        let edges = degrees.iter().sum::<usize>() / 2;
        let bound = annihilation_number_from_degrees(degrees, edges);
        if chosen.len() + bound <= self.best.len() {
            return Ok(());
        }

        let mut without_closed = candidates.minus(&self.adj[v]);
        without_closed.remove(v);
        chosen.push(v);
        self.run(&without_closed, chosen)?;
        chosen.pop();

        let mut without_v = candidates.clone();
        without_v.remove(v);
        self.run(&without_v, chosen)
    }
}

/// Returns `reads` copies of a global optimum of `cost(·, β)`.
///
/// For β ≥ 1/2 the optimum is a maximum stable set, found by
/// branch-and-bound. Smaller penalties need subset enumeration, so they are
/// limited to graphs the QUBO enumerator accepts.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactSampler {
    pub options: ExactOptions,
}

impl Sampler for ExactSampler {
    fn name(&self) -> String {
        "exact".into()
    }

    fn sample(
        &self,
        g: &Graph,
        beta: Penalty,
        config: &SamplerConfig,
    ) -> Result<SampleSet, SamplerError> {
        config.validate()?;
        let witness = if beta >= Penalty::half() {
            exact_alpha_with(g, &self.options)?.witness
        } else {
            exact_qubo_optimum(g, beta)?.0
        };
        let assignment = witness.indicator(g.n());
        Ok(SampleSet::from_assignments(
            g,
            beta,
            config.reads,
            vec![assignment; config.reads],
        ))
    }
}
