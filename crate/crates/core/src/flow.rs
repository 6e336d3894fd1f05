//! Vertex-disjoint paths via unit-capacity flow on the vertex-split network.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::separation::Separation;
use crate::subset::Subset;

const INF: u32 = u32::MAX / 2;

/// Directed network in which every graph vertex `v` becomes an arc
/// `in(v) -> out(v)` of capacity 1 and every edge becomes two infinite arcs.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    heads: Vec<usize>,
    caps: Vec<u32>,
    adj: Vec<Vec<usize>>,
    source: usize,
    sink: usize,
}

impl FlowNetwork {
    fn with_nodes(n: usize, source: usize, sink: usize) -> FlowNetwork {
        FlowNetwork { heads: Vec::new(), caps: Vec::new(), adj: vec![Vec::new(); n], source, sink }
    }

    fn arc(&mut self, from: usize, to: usize, cap: u32) {
        self.adj[from].push(self.heads.len());
        self.heads.push(to);
        self.caps.push(cap);
        self.adj[to].push(self.heads.len());
        self.heads.push(from);
        self.caps.push(0);
    }

    /// Network for `S`-`T` paths inside the induced subgraph on `within`.
    pub fn vertex_split(g: &Graph, s: Subset, t: Subset, within: Subset) -> FlowNetwork {
        let n = g.num_vertices();
        let (source, sink) = (2 * n, 2 * n + 1);
        let mut net = FlowNetwork::with_nodes(2 * n + 2, source, sink);
        for v in within.iter() {
            net.arc(2 * v, 2 * v + 1, 1);
            if s.contains(v) {
                net.arc(source, 2 * v, INF);
            }
            if t.contains(v) {
                net.arc(2 * v + 1, sink, INF);
            }
        }
        for &(u, v) in g.edges() {
            if within.contains(u) && within.contains(v) {
                net.arc(2 * u + 1, 2 * v, INF);
                net.arc(2 * v + 1, 2 * u, INF);
            }
        }
        net
    }

    /// Nodes reachable from the source in the residual network.
    fn residual_reach(&self) -> Vec<Option<usize>> {
        let mut pred = vec![None; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        seen[self.source] = true;
        let mut queue = VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let v = self.heads[a];
                if self.caps[a] > 0 && !seen[v] {
                    seen[v] = true;
                    pred[v] = Some(a);
                    queue.push_back(v);
                }
            }
        }
        pred[self.source] = Some(usize::MAX);
        pred
    }

    /// Augments along shortest paths until none remain; returns the flow value.
    pub fn max_flow(&mut self) -> usize {
        let mut flow = 0;
        loop {
            let pred = self.residual_reach();
            if pred[self.sink].is_none() {
                return flow;
            }
            let mut v = self.sink;
            while v != self.source {
                let a = pred[v].expect("node on augmenting path");
                self.caps[a] -= 1;
                self.caps[a ^ 1] += 1;
                v = self.heads[a ^ 1];
            }
            flow += 1;
        }
    }
}

/// Result of a Menger computation: the maximum number of vertex-disjoint
/// paths and a vertex cut of the same size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MengerResult {
    pub count: usize,
    pub cut: Vec<usize>,
}

/// Maximum number of vertex-disjoint `S`-`T` paths in `g[within]`, with a
/// minimum vertex cut. A vertex of `S ∩ T` is a path of length zero.
pub fn menger_within(g: &Graph, s: Subset, t: Subset, within: Subset) -> (usize, Subset) {
    let mut net = FlowNetwork::vertex_split(g, s & within, t & within, within);
    let count = net.max_flow();
    let reach = net.residual_reach();
    let cut = within
        .iter()
        .filter(|&v| reach[2 * v].is_some() && reach[2 * v + 1].is_none())
        .fold(Subset::EMPTY, |acc, v| acc | Subset::singleton(v));
    (count, cut)
}

pub fn menger(g: &Graph, s: Subset, t: Subset) -> Result<(usize, Subset)> {
    if s.is_empty() || t.is_empty() {
        return Err(Error::Precondition("both terminal sets must be nonempty".into()));
    }
    let full = g.vertex_set();
    if !s.is_subset(full) || !t.is_subset(full) {
        return Err(Error::Precondition("terminal sets must lie in the vertex set".into()));
    }
    Ok(menger_within(g, s, t, full))
}

/// `λ(lo, hi)` for graph separations under the cardinality order: the number
/// of disjoint paths from `lo`'s separator to `hi`'s separator inside the
/// subgraph induced on `lo.right ∩ hi.left`.
pub fn lambda_flow(g: &Graph, lo: Separation, hi: Separation) -> Result<usize> {
    if !lo.leq(hi) {
        return Err(Error::EmptyInterval);
    }
    Ok(menger_within(g, lo.separator(), hi.separator(), lo.right & hi.left).0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> Subset {
        Subset::from_elements(v.iter().copied())
    }

    #[test]
    fn menger_examples() {
        let p3 = Graph::path(3);
        let (count, cut) = menger(&p3, set(&[0]), set(&[2])).unwrap();
        assert_eq!((count, cut.len()), (1, 1));
        let k4 = Graph::complete(4);
        let (count, cut) = menger(&k4, set(&[0, 1]), set(&[2, 3])).unwrap();
        assert_eq!(count, 2);
        assert_eq!(cut.len(), 2);
        assert_eq!(menger(&p3, set(&[1]), set(&[1, 2])).unwrap().0, 1);
        assert!(menger(&p3, Subset::EMPTY, set(&[1])).is_err());
    }

    #[test]
    fn cut_separates() {
        let c6 = Graph::cycle(6);
        let (count, cut) = menger(&c6, set(&[0]), set(&[3])).unwrap();
        assert_eq!(count, 1);
        assert_eq!(cut, set(&[0]));
        let (count, cut) = menger(&c6, set(&[0, 1]), set(&[3, 4])).unwrap();
        assert_eq!(count, 2);
        assert_eq!(cut.len(), 2);
        let rest = c6.vertex_set() - cut;
        assert!((c6.reach(set(&[0, 1]) - cut, rest) & set(&[3, 4])).is_empty());
    }

    #[test]
    fn lambda_flow_examples() {
        let p3 = Graph::path(3);
        let lo = Separation::new(set(&[0]), set(&[0, 1, 2]));
        let hi = Separation::new(set(&[0, 1, 2]), set(&[2]));
        assert_eq!(lambda_flow(&p3, lo, hi).unwrap(), 1);
        let c4 = Graph::cycle(4);
        let lo = Separation::new(set(&[0]), set(&[0, 1, 2, 3]));
        let hi = Separation::new(set(&[0, 1, 2, 3]), set(&[2]));
        // The interval contains lo itself, whose order is 1.
        assert_eq!(lambda_flow(&c4, lo, hi).unwrap(), 1);
        let lo = Separation::new(set(&[0, 1, 3]), set(&[0, 1, 2, 3]));
        let hi = Separation::new(set(&[0, 1, 2, 3]), set(&[1, 2, 3]));
        assert_eq!(lambda_flow(&c4, lo, hi).unwrap(), 2);
        let s = Separation::new(set(&[0, 1, 2]), set(&[0, 2, 3]));
        assert_eq!(lambda_flow(&c4, s, s).unwrap(), 2);
    }
}
