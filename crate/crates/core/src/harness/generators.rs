//! Deterministic instance generators.
//!
//! Apart from [`erdos_renyi`] and [`paley`], each generator rebuilds a DIMACS
//! clique benchmark by its published construction, with vertices labelled in
//! lexicographic order. They return the clique graph; complement it to get
//! the stable-set instance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("edge probability must lie in [0, 1], got {0}")]
    Probability(f64),
    #[error("Paley graphs need a prime q with q = 1 mod 4, got {0}")]
    PaleyOrder(usize),
    #[error("invalid generator parameters: {0}")]
    Parameters(String),
}

/// `G(n, p)`: pairs `u < v` are visited in lexicographic order and each is an
/// edge with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph, GeneratorError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GeneratorError::Probability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(Graph::from_predicate(n, |_, _| rng.gen::<f64>() < p))
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// Vertices `Z_q`; `u ~ v` iff `u - v` is a nonzero square mod `q`.
pub fn paley(q: usize) -> Result<Graph, GeneratorError> {
    if !is_prime(q) || q % 4 != 1 {
        return Err(GeneratorError::PaleyOrder(q));
    }
    let mut square = vec![false; q];
    for x in 1..q {
        square[x * x % q] = true;
    }
    Ok(Graph::from_predicate(q, |u, v| square[(v + q - u) % q]))
}

/// Words of `bits` bits, adjacent iff their Hamming distance is at least `d`.
pub fn hamming(bits: u32, d: u32) -> Result<Graph, GeneratorError> {
    if bits == 0 || bits > 16 {
        return Err(GeneratorError::Parameters(format!("hamming word length {bits}")));
    }
    Ok(Graph::from_predicate(1 << bits, |u, v| ((u ^ v) as u32).count_ones() >= d))
}

/// `w`-subsets of `{0..n}` in lexicographic order, adjacent iff their
/// indicator vectors are at Hamming distance at least `d`.
pub fn johnson(n: usize, w: usize, d: usize) -> Result<Graph, GeneratorError> {
    if w == 0 || w > n || n > 32 {
        return Err(GeneratorError::Parameters(format!("johnson n={n} w={w}")));
    }
    let subsets = combinations(n, w);
    Ok(Graph::from_predicate(subsets.len(), |a, b| {
        let common = (subsets[a] & subsets[b]).count_ones() as usize;
        2 * (w - common) >= d
    }))
}

/// Bitmasks of all `w`-subsets of `{0..n}`, lexicographic by element list.
fn combinations(n: usize, w: usize) -> Vec<u32> {
    fn rec(start: usize, n: usize, left: usize, mask: u32, out: &mut Vec<u32>) {
        if left == 0 {
            out.push(mask);
            return;
        }
        for i in start..=n - left {
            rec(i + 1, n, left - 1, mask | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    rec(0, n, w, 0, &mut out);
    out
}

/// c-fat ring graph: `k = ⌊n / (c ln n)⌋` clusters assigned round-robin;
/// vertices are adjacent iff their clusters are equal or cyclically next to
/// each other.
pub fn c_fat(n: usize, c: f64) -> Result<Graph, GeneratorError> {
    if n < 2 || c <= 0.0 {
        return Err(GeneratorError::Parameters(format!("c-fat n={n} c={c}")));
    }
    let k = (n as f64 / (c * (n as f64).ln())).floor() as usize;
    if k < 3 {
        return Err(GeneratorError::Parameters(format!("c-fat needs at least 3 clusters, got {k}")));
    }
    Ok(Graph::from_predicate(n, |u, v| {
        let d = (u % k).abs_diff(v % k);
        d <= 1 || d == k - 1
    }))
}

/// Keller graph of dimension `dim`: tuples over `{0,1,2,3}` containing a 2
/// with at least two nonzero coordinates; adjacent iff they differ in two or
/// more coordinates, one of them by exactly 2 mod 4.
pub fn keller(dim: u32) -> Result<Graph, GeneratorError> {
    if !(2..=7).contains(&dim) {
        return Err(GeneratorError::Parameters(format!("keller dimension {dim}")));
    }
    let digits = |mut x: usize| -> Vec<usize> {
        let mut out = vec![0; dim as usize];
        for slot in out.iter_mut().rev() {
            *slot = x % 4;
            x /= 4;
        }
        out
    };
    let tuples: Vec<Vec<usize>> = (0..4usize.pow(dim))
        .map(digits)
        .filter(|t| t.contains(&2) && t.iter().filter(|&&c| c != 0).count() >= 2)
        .collect();
    Ok(Graph::from_predicate(tuples.len(), |a, b| {
        let (s, t) = (&tuples[a], &tuples[b]);
        let differing = s.iter().zip(t).filter(|(x, y)| x != y).count();
        differing >= 2 && s.iter().zip(t).any(|(x, y)| (x + 4 - y) % 4 == 2)
    }))
}
