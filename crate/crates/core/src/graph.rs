//! Simple undirected graphs on at most 64 vertices, with edge-list and
//! DIMACS-style readers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::{Subset, MAX_GROUND};

/// A simple undirected graph. Loops are dropped and parallel edges merged on
/// construction; edges keep their first-occurrence order, normalised to
/// `(min, max)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Subset>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::GroundSetSize(n));
        }
        let mut adj = vec![Subset::EMPTY; n];
        let mut kept = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Parse(format!("edge ({u},{v}) out of range for {n} vertices")));
            }
            if u == v || adj[u].contains(v) {
                continue;
            }
            adj[u].insert(v);
            adj[v].insert(u);
            kept.push((u.min(v), u.max(v)));
        }
        Ok(Graph { n, edges: kept, adj })
    }

    pub fn empty(n: usize) -> Result<Graph> {
        Graph::new(n, &[])
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges).expect("valid complete graph")
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &edges).expect("valid path")
    }

    pub fn cycle(n: usize) -> Graph {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((n - 1, 0));
        Graph::new(n, &edges).expect("valid cycle")
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_set(&self) -> Subset {
        Subset::full(self.n)
    }

    pub fn neighbors(&self, v: usize) -> Subset {
        self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// Vertices outside `set` adjacent to some vertex of `set`.
    pub fn boundary(&self, set: Subset) -> Subset {
        set.iter().fold(Subset::EMPTY, |acc, v| acc | self.adj[v]) - set
    }

    /// True iff some edge joins `a` and `b`.
    pub fn joins(&self, a: Subset, b: Subset) -> bool {
        a.iter().any(|v| !(self.adj[v] & b).is_empty())
    }

    /// Vertices reachable from `from` inside the induced subgraph on `within`.
    pub fn reach(&self, from: Subset, within: Subset) -> Subset {
        let mut seen = from & within;
        let mut frontier = seen;
        while !frontier.is_empty() {
            let next = frontier.iter().fold(Subset::EMPTY, |acc, v| acc | self.adj[v]) & within;
            frontier = next - seen;
            seen = seen | frontier;
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.reach(Subset::singleton(0), self.vertex_set()) == self.vertex_set()
    }

    /// Parses either the plain edge-list format (`n m` header, then `u v`
    /// lines, 0-based) or the DIMACS `.col` subset (`p edge n m`, `e u v`,
    /// 1-based, `c` comments).
    pub fn parse(text: &str) -> Result<Graph> {
        let dimacs = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty())
            .map(|l| l.starts_with("p ") || l.starts_with("c ") || l == "c")
            .unwrap_or(false);
        if dimacs {
            parse_dimacs(text)
        } else {
            parse_edge_list(text)
        }
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

fn parse_usize(tok: Option<&str>, line: usize) -> Result<usize> {
    tok.ok_or_else(|| Error::Parse(format!("line {line}: missing field")))?
        .parse()
        .map_err(|e| Error::Parse(format!("line {line}: {e}")))
}

fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
    let mut tok = header.split_whitespace();
    let n = parse_usize(tok.next(), hl)?;
    let m = parse_usize(tok.next(), hl)?;
    let mut edges = Vec::with_capacity(m);
    for (ln, line) in lines {
        let mut tok = line.split_whitespace();
        edges.push((parse_usize(tok.next(), ln)?, parse_usize(tok.next(), ln)?));
    }
    if edges.len() != m {
        return Err(Error::Parse(format!("header announces {m} edges, found {}", edges.len())));
    }
    Graph::new(n, &edges)
}

fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut n = None;
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let mut tok = line.split_whitespace();
        match tok.next() {
            None | Some("c") => {}
            Some("p") => {
                let _format = tok.next();
                n = Some(parse_usize(tok.next(), ln)?);
            }
            Some("e") => {
                let u = parse_usize(tok.next(), ln)?;
                let v = parse_usize(tok.next(), ln)?;
                if u == 0 || v == 0 {
                    return Err(Error::Parse(format!("line {ln}: DIMACS vertices are 1-based")));
                }
                edges.push((u - 1, v - 1));
            }
            Some(other) => return Err(Error::Parse(format!("line {ln}: unknown record '{other}'"))),
        }
    }
    let n = n.ok_or_else(|| Error::Parse("missing 'p' line".into()))?;
    Graph::new(n, &edges)
}

/// Serialisable graph description used inside matroid JSON.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphSpec {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphSpec {
    fn from(g: &Graph) -> Self {
        GraphSpec { n: g.n, edges: g.edges.iter().map(|&(u, v)| [u, v]).collect() }
    }
}

impl TryFrom<&GraphSpec> for Graph {
    type Error = Error;
    fn try_from(spec: &GraphSpec) -> Result<Graph> {
        let edges: Vec<_> = spec.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::new(spec.n, &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalises_loops_and_parallel_edges() {
        let g = Graph::new(3, &[(0, 1), (1, 0), (2, 2), (2, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert!(g.has_edge(2, 1));
    }

    #[test]
    fn parses_both_formats() {
        let a = Graph::parse("3 2\n0 1\n1 2\n").unwrap();
        let b = Graph::parse("c path\np edge 3 2\ne 1 2\ne 2 3\n").unwrap();
        assert_eq!(a, b);
        assert!(Graph::parse("3 3\n0 1\n").is_err());
        assert!(Graph::parse("p edge 2 1\ne 0 1\n").is_err());
    }

    #[test]
    fn reachability() {
        let g = Graph::path(4);
        assert_eq!(g.reach(Subset::singleton(0), Subset::from_elements([0, 1, 3])), Subset::from_elements([0, 1]));
        assert!(g.is_connected());
        assert!(!Graph::empty(2).unwrap().is_connected());
        assert_eq!(g.boundary(Subset::from_elements([1])), Subset::from_elements([0, 2]));
    }
}
