//! Built-in instances and published reference values.

use super::generators::{self, GeneratorError};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnownAlpha {
    pub name: &'static str,
    pub alpha: usize,
    /// Whether the value refers to the complement of the named graph.
    pub complemented: bool,
    /// Experiment family the value was reported in: `direct` for instances
    /// sampled whole, `large` for the n >= 800 runs, `partitioned` for
    /// instances solved through CH-partitioning.
    pub category: &'static str,
}

const fn entry(name: &'static str, alpha: usize, complemented: bool, category: &'static str) -> KnownAlpha {
    KnownAlpha {
        name,
        alpha,
        complemented,
        category,
    }
}

pub const KNOWN_ALPHA: &[KnownAlpha] = &[
    entry("C125.9", 34, true, "direct"),
    entry("dsjc125.5", 10, true, "direct"),
    entry("dsjc125.9", 34, true, "direct"),
    entry("hamming6_2", 32, true, "direct"),
    entry("hamming6_4", 4, true, "direct"),
    entry("johnson8_2_4", 4, true, "direct"),
    entry("johnson8_4_4", 14, true, "direct"),
    entry("johnson16_2_4", 8, true, "direct"),
    entry("MANN_a9", 16, true, "direct"),
    entry("paley61", 5, false, "direct"),
    entry("paley73", 5, false, "direct"),
    entry("paley89", 5, false, "direct"),
    entry("paley97", 6, false, "direct"),
    entry("paley101", 5, false, "direct"),
    entry("brock800_1", 23, true, "large"),
    entry("brock800_2", 24, true, "large"),
    entry("brock800_3", 25, true, "large"),
    entry("brock800_4", 26, true, "large"),
    entry("p_hat1500_1", 12, true, "large"),
    entry("p_hat1500_2", 65, true, "large"),
    entry("p_hat1500_3", 94, true, "large"),
    entry("keller4", 11, true, "partitioned"),
    entry("brock200_1", 21, true, "partitioned"),
    entry("brock200_2", 12, true, "partitioned"),
    entry("brock200_3", 15, true, "partitioned"),
    entry("brock200_4", 17, true, "partitioned"),
    entry("san200_0_7_1", 30, true, "partitioned"),
    entry("san200_0_7_2", 18, true, "partitioned"),
    entry("sanr200_0_7", 18, true, "partitioned"),
    entry("c-fat200-1", 12, true, "partitioned"),
    entry("c-fat200-2", 24, true, "partitioned"),
    entry("c-fat200-5", 58, true, "partitioned"),
    entry("c-fat500-1", 14, true, "partitioned"),
    entry("c-fat500-2", 26, true, "partitioned"),
    entry("c-fat500-5", 64, true, "partitioned"),
    entry("p_hat500_1", 9, true, "partitioned"),
];

/// α of `name` under the given complement setting, if published.
pub fn known_alpha(name: &str, complemented: bool) -> Option<usize> {
    KNOWN_ALPHA
        .iter()
        .find(|k| k.name == name && k.complemented == complemented)
        .map(|k| k.alpha)
}

/// Published partition costs of a stable-set instance (the complement of the
/// DIMACS file). `m` counts edges of that complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionCostReference {
    pub name: &'static str,
    pub n: usize,
    pub m: usize,
    pub regular: usize,
    pub simple: usize,
}

const fn costs(name: &'static str, n: usize, m: usize, regular: usize, simple: usize) -> PartitionCostReference {
    PartitionCostReference {
        name,
        n,
        m,
        regular,
        simple,
    }
}

pub const PARTITION_COST_REFERENCE: &[PartitionCostReference] = &[
    costs("brock200_1", 200, 5066, 166, 136),
    costs("brock200_2", 200, 10024, 115, 87),
    costs("brock200_3", 200, 7852, 135, 109),
    costs("brock200_4", 200, 6811, 148, 120),
    costs("keller4", 171, 5100, 125, 103),
    costs("p_hat500_1", 500, 93181, 205, 95),
    costs("san200_0_7_1", 200, 5970, 156, 131),
    costs("san200_0_7_2", 200, 5970, 165, 123),
    costs("sanr200_0_7", 200, 6032, 162, 127),
    costs("c-fat200-1", 200, 18366, 18, 17),
    costs("c-fat200-2", 200, 16665, 35, 33),
    costs("c-fat200-5", 200, 11427, 87, 84),
    costs("c-fat500-1", 500, 120291, 21, 20),
    costs("c-fat500-2", 500, 115611, 39, 38),
    costs("c-fat500-5", 500, 101559, 96, 93),
];

pub fn partition_cost_reference(name: &str) -> Option<PartitionCostReference> {
    PARTITION_COST_REFERENCE.iter().copied().find(|r| r.name == name)
}

/// Names [`builtin_graph`] understands, besides `paley<q>`.
pub const BUILTIN_NAMES: &[&str] = &[
    "hamming6_2",
    "hamming6_4",
    "hamming8_2",
    "hamming8_4",
    "johnson8_2_4",
    "johnson8_4_4",
    "johnson16_2_4",
    "johnson32_2_4",
    "c-fat200-1",
    "c-fat200-2",
    "c-fat200-5",
    "c-fat500-1",
    "c-fat500-2",
    "c-fat500-5",
    "c-fat500-10",
    "keller4",
    "keller5",
    "keller6",
];

/// Generates a named instance: DIMACS constructions yield the clique graph,
/// `paley<q>` the Paley graph itself. `None` for unknown names.
pub fn builtin_graph(name: &str) -> Option<Result<Graph, GeneratorError>> {
    if let Some(q) = name.strip_prefix("paley") {
        return q.parse().ok().map(generators::paley);
    }
    let graph = match name {
        "hamming6_2" => generators::hamming(6, 2),
        "hamming6_4" => generators::hamming(6, 4),
        "hamming8_2" => generators::hamming(8, 2),
        "hamming8_4" => generators::hamming(8, 4),
        "johnson8_2_4" => generators::johnson(8, 2, 4),
        "johnson8_4_4" => generators::johnson(8, 4, 4),
        "johnson16_2_4" => generators::johnson(16, 2, 4),
        "johnson32_2_4" => generators::johnson(32, 2, 4),
        "keller4" => generators::keller(4),
        "keller5" => generators::keller(5),
        "keller6" => generators::keller(6),
        _ => {
            let rest = name.strip_prefix("c-fat")?;
            let (n, c) = rest.split_once('-')?;
            generators::c_fat(n.parse().ok()?, c.parse().ok()?)
        }
    };
    Some(graph)
}
