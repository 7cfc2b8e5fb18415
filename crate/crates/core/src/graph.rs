//! Simple undirected graphs and the structural primitives shared by every
//! solver: induced subgraphs, complements, components, degree orderings and
//! the annihilation number.
//!
//! Vertices are `0..n` internally. The 1-based numbering of DIMACS files is
//! handled exclusively in [`crate::dimacs`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
}

/// Undirected simple graph with sorted, duplicate-free adjacency lists.
///
/// Immutable after construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|v| (0..n).filter(|&u| u != v).collect())
            .collect();
        Self {
            adj,
            m: n * n.saturating_sub(1) / 2,
        }
    }

    /// Builds a graph from an edge list. Duplicate edges and both orientations
    /// of the same edge collapse to one.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self::from_raw_adjacency(adj))
    }

    /// Builds a graph from a symmetric adjacency predicate evaluated on all
    /// pairs `u < v`.
    pub fn from_predicate(n: usize, mut adjacent: impl FnMut(Vertex, Vertex) -> bool) -> Self {
        let mut adj = vec![Vec::new(); n];
        let mut m = 0;
        for u in 0..n {
            for v in u + 1..n {
                if adjacent(u, v) {
                    adj[u].push(v);
                    adj[v].push(u);
                    m += 1;
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Self { adj, m }
    }

    fn from_raw_adjacency(mut adj: Vec<Vec<Vertex>>) -> Self {
        let mut degree_sum = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            degree_sum += list.len();
        }
        Self {
            adj,
            m: degree_sum / 2,
        }
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges, each undirected edge counted once.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let (short, other) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[short].binary_search(&other).is_ok()
    }

    /// Edges `(u, v)` with `u < v` in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let start = list.partition_point(|&v| v <= u);
            list[start..].iter().map(move |&v| (u, v))
        })
    }

    /// Dense 0/1 adjacency matrix `A`.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u8>> {
        let n = self.n();
        let mut a = vec![vec![0u8; n]; n];
        for (u, v) in self.edges() {
            a[u][v] = 1;
            a[v][u] = 1;
        }
        a
    }

    /// Edge density `m / C(n, 2)`; zero for graphs with fewer than two vertices.
    pub fn density(&self) -> f64 {
        let pairs = self.n() * self.n().saturating_sub(1) / 2;
        if pairs == 0 {
            0.0
        } else {
            self.m as f64 / pairs as f64
        }
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet((0..self.n()).collect())
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        }
    }

    /// Neighbours of `v` in the complement graph, computed from the sorted
    /// adjacency list without materialising the complement.
    pub fn non_neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let list = &self.adj[v];
        let mut next = 0;
        (0..self.n()).filter(move |&u| {
            while next < list.len() && list[next] < u {
                next += 1;
            }
            u != v && !(next < list.len() && list[next] == u)
        })
    }
}

/// Sorted, duplicate-free set of vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new<I: IntoIterator<Item = Vertex>>(vertices: I) -> Self {
        let mut members: Vec<Vertex> = vertices.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Self(members)
    }

    pub fn from_indicator(bits: &[bool]) -> Self {
        Self(
            bits.iter()
                .enumerate()
                .filter_map(|(i, &b)| b.then_some(i))
                .collect(),
        )
    }

    pub fn indicator(&self, n: usize) -> Vec<bool> {
        let mut bits = vec![false; n];
        for &v in &self.0 {
            bits[v] = true;
        }
        bits
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::new(self.iter().chain(other.iter()))
    }

    /// Errors if any member is not a vertex of `g`.
    pub fn check(&self, g: &Graph) -> Result<(), GraphError> {
        match self.0.last() {
            Some(&v) => g.check_vertex(v),
            None => Ok(()),
        }
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

/// `G[X]` together with the local-to-parent vertex mapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedView {
    pub subgraph: Graph,
    /// `mapping[local] = parent`; strictly increasing.
    pub mapping: Vec<Vertex>,
}

impl InducedView {
    pub fn to_parent(&self, local: &VertexSet) -> VertexSet {
        VertexSet(local.iter().map(|v| self.mapping[v]).collect())
    }
}

/// For each member of `x` (in order), the positions in `x` of its neighbours
/// inside `x`. Each vertex costs `O(min(deg, |x|) log)` so dense parents with
/// small selections stay cheap.
fn inner_adjacency(g: &Graph, x: &VertexSet) -> Vec<Vec<usize>> {
    let members = x.as_slice();
    members
        .iter()
        .map(|&v| {
            let nbrs = g.neighbors(v);
            if nbrs.len() <= members.len() {
                nbrs.iter()
                    .filter_map(|u| members.binary_search(u).ok())
                    .collect()
            } else {
                members
                    .iter()
                    .enumerate()
                    .filter(|&(_, &u)| nbrs.binary_search(&u).is_ok())
                    .map(|(i, _)| i)
                    .collect()
            }
        })
        .collect()
}

/// The subgraph of `g` induced by `x`.
pub fn induced(g: &Graph, x: &VertexSet) -> Result<InducedView, GraphError> {
    x.check(g)?;
    let adj = inner_adjacency(g, x);
    let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
    Ok(InducedView {
        subgraph: Graph { adj, m },
        mapping: x.as_slice().to_vec(),
    })
}

/// Degrees inside `G[x]`, in the order of `x`, and the edge count of `G[x]`.
pub fn induced_degrees(g: &Graph, x: &VertexSet) -> (Vec<usize>, usize) {
    let degrees: Vec<usize> = inner_adjacency(g, x).iter().map(Vec::len).collect();
    let m = degrees.iter().sum::<usize>() / 2;
    (degrees, m)
}

/// `|E(G[x])|`.
pub fn induced_edge_count(g: &Graph, x: &VertexSet) -> usize {
    induced_degrees(g, x).1
}

pub fn complement(g: &Graph) -> Graph {
    let adj: Vec<Vec<Vertex>> = (0..g.n()).map(|v| g.non_neighbors(v).collect()).collect();
    let pairs = g.n() * g.n().saturating_sub(1) / 2;
    Graph {
        adj,
        m: pairs - g.m(),
    }
}

/// Connected components ordered by their smallest member.
pub fn connected_components(g: &Graph) -> Vec<VertexSet> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    let mut stack = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        stack.push(root);
        let mut members = Vec::new();
        while let Some(v) = stack.pop() {
            members.push(v);
            for &u in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        components.push(VertexSet::new(members));
    }
    components
}

/// Largest `a` such that the `a` smallest degrees sum to at most `m`.
pub fn annihilation_number_from_degrees(mut degrees: Vec<usize>, m: usize) -> usize {
    degrees.sort_unstable();
    let mut total = 0;
    for (i, d) in degrees.iter().enumerate() {
        total += d;
        if total > m {
            return i;
        }
    }
    degrees.len()
}

/// Annihilation number `a(G)`, an upper bound on the stability number.
pub fn annihilation_number(g: &Graph) -> usize {
    annihilation_number_from_degrees(g.degrees(), g.m())
}

/// `a(G[x])` without building the induced subgraph.
pub fn induced_annihilation_number(g: &Graph, x: &VertexSet) -> usize {
    let (degrees, m) = induced_degrees(g, x);
    annihilation_number_from_degrees(degrees, m)
}

pub fn is_stable_set(g: &Graph, x: &VertexSet) -> bool {
    let members = x.as_slice();
    members.iter().all(|&v| {
        let nbrs = g.neighbors(v);
        if nbrs.len() <= members.len() {
            nbrs.iter().all(|u| members.binary_search(u).is_err())
        } else {
            members.iter().all(|u| nbrs.binary_search(u).is_err())
        }
    })
}

/// Vertices sorted by ascending degree, ties by ascending id.
pub fn degree_ascending_order(g: &Graph) -> Vec<Vertex> {
    let mut order: Vec<Vertex> = (0..g.n()).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    order
}

/// Vertices sorted by ascending degree in the complement of `g` (that is,
/// descending degree in `g`), ties by ascending id.
pub fn complement_degree_ascending_order(g: &Graph) -> Vec<Vertex> {
    let mut order: Vec<Vertex> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    order
}
