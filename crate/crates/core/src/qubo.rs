//! Penalty QUBO for the stable set problem, `min x^T (-I + βA) x`, with exact
//! rational cost accounting.
//!
//! For a vertex set `X` the objective collapses to
//! `cost(X, β) = -|X| + 2β |E(G[X])|`, because `x^T A x` counts every
//! edge inside `X` twice.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graph::{induced_edge_count, Graph, VertexSet};

pub type Rational = Ratio<i64>;

/// Largest graph the exhaustive minimiser will enumerate.
pub const ENUMERATION_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuboError {
    #[error("penalty must be positive, got {0}")]
    NonPositivePenalty(String),
    #[error("cannot parse `{0}` as a rational number")]
    InvalidRational(String),
    #[error("graph has {n} vertices; exhaustive enumeration is limited to {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("all coefficients are zero")]
    AllZeroCoefficients,
    #[error("line {line}: malformed QUBO triple `{text}`")]
    MalformedTriple { line: usize, text: String },
}

/// Formats a rational as `p/q`, or as a bare integer when `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.125`.
pub fn parse_rational(text: &str) -> Result<Rational, QuboError> {
    let bad = || QuboError::InvalidRational(text.to_string());
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part: i64 = match int.trim_start_matches(['-', '+']) {
            "" => 0,
            digits => digits.parse().map_err(|_| bad())?,
        };
        let scale = 10i64.pow(frac.len() as u32);
        let frac_part: i64 = frac.parse().map_err(|_| bad())?;
        let magnitude = int_part
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac_part))
            .ok_or_else(bad)?;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(numer, scale));
    }
    t.parse::<i64>().map(Rational::from_integer).map_err(|_| bad())
}

/// Penalty parameter β > 0, held exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Penalty(Rational);

impl Penalty {
    pub fn new(value: Rational) -> Result<Self, QuboError> {
        if value.is_positive() {
            Ok(Self(value))
        } else {
            Err(QuboError::NonPositivePenalty(format_rational(&value)))
        }
    }

    pub fn ratio(numer: i64, denom: i64) -> Result<Self, QuboError> {
        if denom == 0 {
            return Err(QuboError::InvalidRational(format!("{numer}/{denom}")));
        }
        Self::new(Rational::new(numer, denom))
    }

    /// β = 1/2, the smallest penalty for which the QUBO optimum equals α(G).
    pub fn half() -> Self {
        Self(Rational::new(1, 2))
    }

    pub fn value(&self) -> Rational {
        self.0
    }

    /// Penalty used when re-solving samples: β itself when β ≥ 1/2, else 1/2.
    pub fn post_processing_penalty(self) -> Penalty {
        self.max(Penalty::half())
    }

    pub(crate) fn scale(&self) -> CostScale {
        CostScale {
            numer: *self.0.numer() as i128,
            denom: *self.0.denom() as i128,
        }
    }
}

impl fmt::Display for Penalty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl FromStr for Penalty {
    type Err = QuboError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Penalty::new(parse_rational(s)?)
    }
}

impl Serialize for Penalty {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Penalty {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Integer image of the cost: `denom · cost = -denom·|X| + 2·numer·|E(G[X])|`.
/// Samplers compare and update costs in this scale without rounding.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CostScale {
    pub numer: i128,
    pub denom: i128,
}

impl CostScale {
    pub fn scaled(&self, size: usize, edges: usize) -> i128 {
        -self.denom * size as i128 + 2 * self.numer * edges as i128
    }

    /// Scaled change when flipping a vertex with `set_neighbors` selected
    /// neighbours; `adding` tells whether the vertex enters the set.
    pub fn flip_delta(&self, adding: bool, set_neighbors: usize) -> i128 {
        let d = -self.denom + 2 * self.numer * set_neighbors as i128;
        if adding {
            d
        } else {
            -d
        }
    }

    pub fn to_f64(self, scaled: i128) -> f64 {
        scaled as f64 / self.denom as f64
    }
}

/// `-|X| + 2β |E(G[X])|`, from the two counts.
pub fn cost_from_counts(size: usize, edges: usize, beta: Penalty) -> Rational {
    let b = beta.value();
    Rational::from_integer(-(size as i64)) + b * Rational::from_integer(2 * edges as i64)
}

/// `cost(X, β)` for a vertex set of `g`.
pub fn cost(g: &Graph, x: &VertexSet, beta: Penalty) -> Rational {
    debug_assert!(x.check(g).is_ok());
    cost_from_counts(x.len(), induced_edge_count(g, x), beta)
}

/// The matrix `Q = -I + βA` over a borrowed graph. Stored implicitly: the
/// diagonal is `-1` and the off-diagonal support is the edge set.
#[derive(Debug, Clone, Copy)]
pub struct QuboInstance<'g> {
    source: &'g Graph,
    beta: Penalty,
}

pub fn build_qubo(g: &Graph, beta: Penalty) -> QuboInstance<'_> {
    QuboInstance { source: g, beta }
}

impl<'g> QuboInstance<'g> {
    pub fn source(&self) -> &'g Graph {
        self.source
    }

    pub fn beta(&self) -> Penalty {
        self.beta
    }

    pub fn n(&self) -> usize {
        self.source.n()
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        if i == j {
            -Rational::one()
        } else if self.source.has_edge(i, j) {
            self.beta.value()
        } else {
            Rational::zero()
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let n = self.n();
        let mut q = vec![vec![Rational::zero(); n]; n];
        for (i, row) in q.iter_mut().enumerate() {
            row[i] = -Rational::one();
        }
        for (u, v) in self.source.edges() {
            q[u][v] = self.beta.value();
            q[v][u] = self.beta.value();
        }
        q
    }

    /// `x^T Q x` from the sparse representation.
    pub fn evaluate(&self, x: &[bool]) -> Rational {
        assert_eq!(x.len(), self.n(), "assignment length must equal n");
        let selected = x.iter().filter(|&&b| b).count();
        let both = self
            .source
            .edges()
            .filter(|&(u, v)| x[u] && x[v])
            .count();
        cost_from_counts(selected, both, self.beta)
    }

    /// Upper-triangular coefficients `c_ij` (i ≤ j) such that
    /// `x^T Q x = Σ_{i ≤ j} c_ij x_i x_j`. Diagonal `c_ii = -1`, off-diagonal
    /// `c_ij = 2β` on edges.
    pub fn upper_triangular(&self) -> QuboCoefficients {
        let two_beta = self.beta.value() * Rational::from_integer(2);
        QuboCoefficients {
            linear: vec![-Rational::one(); self.n()],
            quadratic: self.source.edges().map(|(u, v)| (u, v, two_beta)).collect(),
        }
    }

    /// Text export: one `i j value` triple per line, 0-based, upper triangle
    /// with the diagonal, values as `p/q`, sorted by `(i, j)`.
    pub fn export(&self) -> String {
        self.upper_triangular().to_triples()
    }
}

/// A general QUBO `Σ_i l_i x_i + Σ_(i,j) q_ij x_i x_j` in exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QuboCoefficients {
    pub linear: Vec<Rational>,
    pub quadratic: Vec<(usize, usize, Rational)>,
}

impl QuboCoefficients {
    pub fn n(&self) -> usize {
        self.linear.len()
    }

    pub fn evaluate(&self, x: &[bool]) -> Rational {
        let linear: Rational = self
            .linear
            .iter()
            .zip(x)
            .filter(|(_, &b)| b)
            .map(|(c, _)| *c)
            .sum();
        let quadratic: Rational = self
            .quadratic
            .iter()
            .filter(|&&(i, j, _)| x[i] && x[j])
            .map(|&(_, _, c)| c)
            .sum();
        linear + quadratic
    }

    pub fn max_abs(&self) -> Rational {
        self.linear
            .iter()
            .chain(self.quadratic.iter().map(|(_, _, c)| c))
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn scaled(&self, factor: Rational) -> QuboCoefficients {
        QuboCoefficients {
            linear: self.linear.iter().map(|c| c * factor).collect(),
            quadratic: self
                .quadratic
                .iter()
                .map(|&(i, j, c)| (i, j, c * factor))
                .collect(),
        }
    }

    pub fn to_triples(&self) -> String {
        let mut triples: Vec<(usize, usize, Rational)> = self
            .linear
            .iter()
            .enumerate()
            .map(|(i, c)| (i, i, *c))
            .chain(self.quadratic.iter().map(|&(i, j, c)| (i.min(j), i.max(j), c)))
            .collect();
        triples.sort_by_key(|&(i, j, _)| (i, j));
        let mut out = String::new();
        for (i, j, c) in triples {
            out.push_str(&format!("{i} {j} {}\n", format_rational(&c)));
        }
        out
    }

    /// Reads the triple format written by [`QuboCoefficients::to_triples`].
    /// The variable count is one past the largest index.
    pub fn from_triples(text: &str) -> Result<Self, QuboError> {
        let mut diagonal = Vec::new();
        let mut quadratic = Vec::new();
        let mut n = 0;
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let bad = || QuboError::MalformedTriple {
                line: line_no,
                text: trimmed.to_string(),
            };
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            let [i, j, c] = parts.as_slice() else {
                return Err(bad());
            };
            let i: usize = i.parse().map_err(|_| bad())?;
            let j: usize = j.parse().map_err(|_| bad())?;
            let c = parse_rational(c).map_err(|_| bad())?;
            n = n.max(i + 1).max(j + 1);
            if i == j {
                diagonal.push((i, c));
            } else {
                quadratic.push((i, j, c));
            }
        }
        let mut linear = vec![Rational::zero(); n];
        for (i, c) in diagonal {
            linear[i] += c;
        }
        Ok(QuboCoefficients { linear, quadratic })
    }
}

/// Divides every coefficient by the largest magnitude when it exceeds one,
/// mimicking an annealer that maps its input into `[-1, 1]`. Returns the
/// scaled coefficients and the multiplier applied.
pub fn rescale_to_unit(
    coefficients: &QuboCoefficients,
) -> Result<(QuboCoefficients, Rational), QuboError> {
    let largest = coefficients.max_abs();
    if largest.is_zero() {
        return Err(QuboError::AllZeroCoefficients);
    }
    let factor = if largest > Rational::one() {
        largest.recip()
    } else {
        Rational::one()
    };
    Ok((coefficients.scaled(factor), factor))
}

/// Exhaustive global minimiser of `cost(·, β)`; `-cost` is `α(G, β)`.
///
/// Enumerates in Gray-code order so each step is an O(1) incremental update.
/// Ties go to the lexicographically smallest indicator vector.
pub fn exact_qubo_optimum(g: &Graph, beta: Penalty) -> Result<(VertexSet, Rational), QuboError> {
    let n = g.n();
    if n > ENUMERATION_LIMIT {
        return Err(QuboError::TooLarge {
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &u| acc | (1 << u)))
        .collect();
    let scale = beta.scale();

    let mut current = 0u32;
    let mut size = 0usize;
    let mut edges = 0usize;
    let mut best_mask = 0u32;
    let mut best_scaled = 0i128;

    for step in 1u64..(1u64 << n) {
        let v = step.trailing_zeros() as usize;
        current ^= 1 << v;
        let touching = (masks[v] & current).count_ones() as usize;
        if current & (1 << v) != 0 {
            size += 1;
            edges += touching;
        } else {
            size -= 1;
            edges -= touching;
        }
        let scaled = scale.scaled(size, edges);
        if scaled < best_scaled || (scaled == best_scaled && lex_less(current, best_mask)) {
            best_scaled = scaled;
            best_mask = current;
        }
    }

    let witness = VertexSet::new((0..n).filter(|&v| best_mask & (1 << v) != 0));
    let value = Rational::new(best_scaled as i64, scale.denom as i64);
    Ok((witness, value))
}

/// Lexicographic order of indicator vectors `(x_0, x_1, ...)` held as masks.
fn lex_less(a: u32, b: u32) -> bool {
    let diff = a ^ b;
    diff != 0 && a & (1 << diff.trailing_zeros()) == 0
}

/// One binary assignment with its cost recomputed from scratch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub assignment: Vec<bool>,
    pub cost: Rational,
}

impl Sample {
    pub fn new(g: &Graph, beta: Penalty, assignment: Vec<bool>) -> Self {
        assert_eq!(assignment.len(), g.n(), "assignment length must equal n");
        let x = VertexSet::from_indicator(&assignment);
        let cost = cost(g, &x, beta);
        Self { assignment, cost }
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::from_indicator(&self.assignment)
    }

    pub fn size(&self) -> usize {
        self.assignment.iter().filter(|&&b| b).count()
    }
}

/// Samples sorted by ascending cost (ties by assignment), plus the penalty
/// they were scored with and the number of reads requested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSet {
    samples: Vec<Sample>,
    beta: Penalty,
    reads: usize,
}

impl SampleSet {
    /// Scores every assignment against `g` and sorts.
    pub fn from_assignments(
        g: &Graph,
        beta: Penalty,
        reads: usize,
        assignments: Vec<Vec<bool>>,
    ) -> Self {
        let samples = assignments
            .into_iter()
            .map(|a| Sample::new(g, beta, a))
            .collect();
        Self::from_samples(beta, reads, samples)
    }

    fn from_samples(beta: Penalty, reads: usize, mut samples: Vec<Sample>) -> Self {
        samples.sort_by(|a, b| a.cost.cmp(&b.cost).then_with(|| a.assignment.cmp(&b.assignment)));
        Self {
            samples,
            beta,
            reads,
        }
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn beta(&self) -> Penalty {
        self.beta
    }

    pub fn reads(&self) -> usize {
        self.reads
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn best(&self) -> Option<&Sample> {
        self.samples.first()
    }

    /// `-cost(X_1, β)`, the solver's own estimate of the stability number.
    pub fn alpha_hat(&self) -> Option<Rational> {
        self.best().map(|s| -s.cost)
    }

    pub fn is_sorted(&self) -> bool {
        self.samples.windows(2).all(|w| w[0].cost <= w[1].cost)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn beta(p: i64, q: i64) -> Penalty {
        Penalty::ratio(p, q).unwrap()
    }

    #[test]
    fn penalty_validation_and_format() {
        assert!(Penalty::new(r(0, 1)).is_err());
        assert!(Penalty::new(r(-1, 2)).is_err());
        assert_eq!("1/2".parse::<Penalty>().unwrap(), Penalty::half());
        assert_eq!("0.125".parse::<Penalty>().unwrap(), beta(1, 8));
        assert_eq!("10".parse::<Penalty>().unwrap().to_string(), "10");
        assert_eq!(beta(2, 4).to_string(), "1/2");
        assert!("x".parse::<Penalty>().is_err());
        assert!("1/0".parse::<Penalty>().is_err());
    }

    #[test]
    fn post_processing_policy() {
        assert_eq!(beta(1, 10).post_processing_penalty(), Penalty::half());
        assert_eq!(beta(1, 4).post_processing_penalty(), Penalty::half());
        assert_eq!(Penalty::half().post_processing_penalty(), Penalty::half());
        assert_eq!(beta(10, 1).post_processing_penalty(), beta(10, 1));
    }

    #[test]
    fn build_qubo_examples() {
        let k2 = Graph::complete(2);
        let q = build_qubo(&k2, Penalty::half()).to_dense();
        assert_eq!(q, vec![vec![r(-1, 1), r(1, 2)], vec![r(1, 2), r(-1, 1)]]);

        let empty = Graph::empty(3);
        let q = build_qubo(&empty, beta(7, 3)).to_dense();
        for (i, row) in q.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                assert_eq!(c, if i == j { r(-1, 1) } else { r(0, 1) });
            }
        }

        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let inst = build_qubo(&p3, beta(1, 1));
        assert_eq!(inst.entry(0, 1), r(1, 1));
        assert_eq!(inst.entry(2, 1), r(1, 1));
        assert_eq!(inst.entry(0, 2), r(0, 1));
        assert_eq!(inst.entry(1, 1), r(-1, 1));
    }

    #[test]
    fn cost_examples() {
        // thirty vertices, five induced edges, β = 1
        assert_eq!(cost_from_counts(30, 5, beta(1, 1)), r(-20, 1));
        let k2 = Graph::complete(2);
        assert_eq!(cost(&k2, &VertexSet::new([0, 1]), beta(1, 4)), r(-3, 2));
        assert_eq!(cost(&k2, &VertexSet::default(), beta(3, 7)), r(0, 1));
    }

    #[test]
    fn exact_optimum_examples() {
        let k2 = Graph::complete(2);
        let (x, c) = exact_qubo_optimum(&k2, beta(1, 4)).unwrap();
        assert_eq!((x, c), (VertexSet::new([0, 1]), r(-3, 2)));

        let (x, c) = exact_qubo_optimum(&k2, Penalty::half()).unwrap();
        assert_eq!(c, r(-1, 1));
        // (0,1) is lexicographically smallest among the three minimisers
        assert_eq!(x, VertexSet::new([1]));

        let c5 = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(exact_qubo_optimum(&c5, beta(1, 1)).unwrap().1, r(-2, 1));

        assert_eq!(
            exact_qubo_optimum(&Graph::empty(25), Penalty::half()),
            Err(QuboError::TooLarge { n: 25, limit: 24 })
        );
    }

    #[test]
    fn rescale_examples() {
        let e2 = QuboCoefficients {
            linear: vec![r(1, 10), r(2, 10)],
            quadratic: vec![(0, 1, r(5, 1))],
        };
        let (scaled, factor) = rescale_to_unit(&e2).unwrap();
        assert_eq!(factor, r(1, 5));
        assert_eq!(scaled.linear, vec![r(2, 100), r(4, 100)]);
        assert_eq!(scaled.quadratic, vec![(0, 1, r(1, 1))]);
        assert_eq!(scaled.evaluate(&[true, true]), r(106, 100));

        let small = QuboCoefficients {
            linear: vec![r(-1, 1), r(1, 3)],
            quadratic: vec![(0, 1, r(1, 2))],
        };
        assert_eq!(rescale_to_unit(&small).unwrap(), (small.clone(), r(1, 1)));

        assert_eq!(
            rescale_to_unit(&QuboCoefficients {
                linear: vec![r(0, 1)],
                quadratic: vec![]
            }),
            Err(QuboError::AllZeroCoefficients)
        );
    }

    #[test]
    fn export_format_and_parse() {
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let text = build_qubo(&p3, Penalty::half()).export();
        assert_eq!(text, "0 0 -1\n0 1 1\n1 1 -1\n1 2 1\n2 2 -1\n");
        let parsed = QuboCoefficients::from_triples(&text).unwrap();
        assert_eq!(parsed, build_qubo(&p3, Penalty::half()).upper_triangular());
        assert!(matches!(
            QuboCoefficients::from_triples("0 0\n"),
            Err(QuboError::MalformedTriple { line: 1, .. })
        ));
    }

    #[test]
    fn sample_set_sorts_and_rescores() {
        let k2 = Graph::complete(2);
        let set = SampleSet::from_assignments(
            &k2,
            beta(1, 1),
            3,
            vec![vec![true, true], vec![false, false], vec![true, false]],
        );
        let costs: Vec<Rational> = set.samples().iter().map(|s| s.cost).collect();
        assert_eq!(costs, vec![r(-1, 1), r(0, 1), r(0, 1)]);
        assert!(set.is_sorted());
        assert_eq!(set.alpha_hat(), Some(r(1, 1)));
        // equal cost: (0,0) sorts before (1,1)
        assert_eq!(set.samples()[1].assignment, vec![false, false]);
    }

    #[test]
    fn lexicographic_mask_order() {
        // (x0, x1) = (0, 1) is mask 0b10, (1, 0) is mask 0b01
        assert!(lex_less(0b10, 0b01));
        assert!(!lex_less(0b01, 0b10));
        assert!(!lex_less(0b11, 0b11));
    }
}
