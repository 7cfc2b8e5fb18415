//! DIMACS clique-format reading and writing.
//!
//! ```text
//! c optional comments
//! p edge <n> <m>
//! e <i> <j>
//! ```
//!
//! Endpoints are 1-based in the file and 0-based in [`Graph`].

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("line {line}: edge line before the `p` problem line")]
    MissingProblemLine { line: usize },
    #[error("line {line}: duplicate `p` problem line")]
    DuplicateProblemLine { line: usize },
    #[error("line {line}: endpoint {vertex} outside 1..={n}")]
    EndpointOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: malformed token `{token}`")]
    Malformed { line: usize, token: String },
}

/// A parsed file: the graph plus the edge count its header claimed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimacsFile {
    pub graph: Graph,
    pub declared_edges: usize,
}

pub fn parse_dimacs(input: &[u8]) -> Result<Graph, DimacsError> {
    parse_dimacs_file(input).map(|file| file.graph)
}

pub fn parse_dimacs_file(input: &[u8]) -> Result<DimacsFile, DimacsError> {
    let text = String::from_utf8_lossy(input);
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let mut tokens = raw.split_whitespace();
        let Some(kind) = tokens.next() else {
            continue;
        };
        match kind {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(DimacsError::DuplicateProblemLine { line });
                }
                let format = tokens.next().ok_or_else(|| malformed(line, raw))?;
                if !matches!(format, "edge" | "edges" | "col") {
                    return Err(malformed(line, format));
                }
                let n = number(line, tokens.next(), raw)?;
                let m = number(line, tokens.next(), raw)?;
                if let Some(extra) = tokens.next() {
                    return Err(malformed(line, extra));
                }
                header = Some((n, m));
            }
            "e" => {
                let Some((n, _)) = header else {
                    return Err(DimacsError::MissingProblemLine { line });
                };
                let i = number(line, tokens.next(), raw)?;
                let j = number(line, tokens.next(), raw)?;
                if let Some(extra) = tokens.next() {
                    return Err(malformed(line, extra));
                }
                for vertex in [i, j] {
                    if vertex == 0 || vertex > n {
                        return Err(DimacsError::EndpointOutOfRange { line, vertex, n });
                    }
                }
                if i == j {
                    return Err(DimacsError::SelfLoop { line, vertex: i });
                }
                edges.push((i - 1, j - 1));
            }
            other => return Err(malformed(line, other)),
        }
    }

    let (n, declared_edges) =
        header.ok_or(DimacsError::MissingProblemLine { line: last_line + 1 })?;
    let graph = Graph::from_edges(n, edges).expect("endpoints validated above");
    if graph.m() != declared_edges {
        log::warn!(
            "DIMACS header declares {declared_edges} edges but {} distinct edges were read",
            graph.m()
        );
    }
    Ok(DimacsFile {
        graph,
        declared_edges,
    })
}

fn malformed(line: usize, token: &str) -> DimacsError {
    DimacsError::Malformed {
        line,
        token: token.to_string(),
    }
}

fn number(line: usize, token: Option<&str>, raw: &str) -> Result<usize, DimacsError> {
    let token = token.ok_or_else(|| malformed(line, raw.trim()))?;
    token.parse().map_err(|_| malformed(line, token))
}

/// `p edge n m` followed by `e i j` lines with `i < j` in lexicographic order.
pub fn serialize_dimacs(g: &Graph) -> String {
    let mut out = String::with_capacity(16 + 12 * g.m());
    writeln!(out, "p edge {} {}", g.n(), g.m()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}
