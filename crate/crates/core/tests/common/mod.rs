//! Brute-force reference implementations that share no code with the
//! library's algorithms, only its `Graph` container.
#![allow(dead_code)]

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stable_qubo::graph::Graph;

pub type Q = Ratio<i64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p) drawn from the given generator.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn masks(g: &Graph) -> Vec<u64> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | (1 << u)))
        .collect()
}

pub fn mask_is_stable(adj: &[u64], mask: u64) -> bool {
    (0..adj.len()).all(|v| mask & (1 << v) == 0 || adj[v] & mask == 0)
}

pub fn mask_edges(adj: &[u64], mask: u64) -> usize {
    (0..adj.len())
        .filter(|&v| mask & (1 << v) != 0)
        .map(|v| (adj[v] & mask).count_ones() as usize)
        .sum::<usize>()
        / 2
}

/// α(G) by checking every subset.
pub fn alpha(g: &Graph) -> usize {
    let adj = masks(g);
    (0u64..1 << g.n())
        .filter(|&m| mask_is_stable(&adj, m))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// α of the subgraph induced by `members`.
pub fn alpha_of(g: &Graph, members: &[usize]) -> usize {
    let sub = induced_by_hand(g, members);
    alpha(&sub)
}

pub fn induced_by_hand(g: &Graph, members: &[usize]) -> Graph {
    let mut edges = Vec::new();
    for (i, &u) in members.iter().enumerate() {
        for (j, &v) in members.iter().enumerate().skip(i + 1) {
            if g.neighbors(u).contains(&v) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(members.len(), edges).unwrap()
}

/// Every maximum stable set, as bitmasks.
pub fn maximum_stable_sets(g: &Graph) -> Vec<u64> {
    let adj = masks(g);
    let a = alpha(g);
    (0u64..1 << g.n())
        .filter(|&m| m.count_ones() as usize == a && mask_is_stable(&adj, m))
        .collect()
}

/// `min_x x^T Q x` for `Q = -I + βA`, by dense matrix products.
pub fn qubo_minimum(g: &Graph, beta: Q) -> Q {
    let n = g.n();
    let mut q = vec![vec![Q::from_integer(0); n]; n];
    for (v, row) in q.iter_mut().enumerate() {
        row[v] = Q::from_integer(-1);
        for &u in g.neighbors(v) {
            row[u] = beta;
        }
    }
    (0u64..1 << n)
        .map(|mask| quadratic_form(&q, mask))
        .min()
        .unwrap_or_else(|| Q::from_integer(0))
}

pub fn quadratic_form(q: &[Vec<Q>], mask: u64) -> Q {
    let on = |i: usize| mask & (1 << i) != 0;
    let mut total = Q::from_integer(0);
    for (_, row) in q.iter().enumerate().filter(|(i, _)| on(*i)) {
        for (_, &x) in row.iter().enumerate().filter(|(j, _)| on(*j)) {
            total += x;
        }
    }
    total
}

/// Largest `a` whose `a` smallest degrees sum to at most `m`.
pub fn annihilation(g: &Graph) -> usize {
    let mut d: Vec<usize> = (0..g.n()).map(|v| g.neighbors(v).len()).collect();
    d.sort();
    let mut sum = 0;
    let mut a = 0;
    for x in d {
        sum += x;
        if sum > g.m() {
            break;
        }
        a += 1;
    }
    a
}

pub fn is_stable(g: &Graph, set: &[usize]) -> bool {
    set.iter()
        .all(|&u| set.iter().all(|&v| u == v || !g.neighbors(u).contains(&v)))
}

/// Fisher-Yates permutation of `0..n`.
pub fn shuffled(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}
