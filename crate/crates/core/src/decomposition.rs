//! Tree-decompositions of graphs and matroids, and their S-tree encodings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matroid::Matroid;
use crate::rank::Rank;
use crate::separation::{Separation, Universe};
use crate::stree::STree;
use crate::subset::Subset;

/// Checks that `edges` form a tree on `n` vertices and returns adjacency lists.
fn tree_adjacency(n: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<usize>>> {
    if n == 0 || edges.len() + 1 != n {
        return Err(Error::InvalidDecomposition(format!("{} edges do not form a tree on {n} vertices", edges.len())));
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u >= n || v >= n || u == v {
            return Err(Error::InvalidDecomposition(format!("bad tree edge ({u}, {v})")));
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::InvalidDecomposition("tree is disconnected".into()));
    }
    Ok(adj)
}

/// Vertices on `from`'s side of the tree edge `from - to`.
fn side(adj: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    let mut out = vec![from];
    let mut stack = vec![(from, to)];
    while let Some((u, parent)) = stack.pop() {
        for &w in &adj[u] {
            if w != parent {
                out.push(w);
                stack.push((w, u));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphTreeDecomposition {
    pub edges: Vec<(usize, usize)>,
    pub bags: Vec<Subset>,
}

impl GraphTreeDecomposition {
    pub fn new(edges: Vec<(usize, usize)>, bags: Vec<Subset>) -> Result<GraphTreeDecomposition> {
        tree_adjacency(bags.len(), &edges)?;
        Ok(GraphTreeDecomposition { edges, bags })
    }

    pub fn single_bag(g: &Graph) -> GraphTreeDecomposition {
        GraphTreeDecomposition { edges: Vec::new(), bags: vec![g.vertex_set()] }
    }

    /// `max |V_t| - 1`.
    pub fn width(&self) -> i64 {
        self.bags.iter().map(|b| b.len() as i64).max().unwrap_or(0) - 1
    }

    pub fn adhesion(&self, e: usize) -> Subset {
        let (u, v) = self.edges[e];
        self.bags[u] & self.bags[v]
    }

    /// Checks coverage of vertices and edges and that every vertex's bags
    /// form a subtree.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let adj = tree_adjacency(self.bags.len(), &self.edges)?;
        if let Some(t) = self.bags.iter().position(|b| !b.is_subset(g.vertex_set())) {
            return Err(Error::InvalidDecomposition(format!("bag {t} has vertices outside the graph")));
        }
        for v in 0..g.num_vertices() {
            let holders: Vec<usize> = (0..self.bags.len()).filter(|&t| self.bags[t].contains(v)).collect();
            let Some(&start) = holders.first() else {
                return Err(Error::InvalidDecomposition(format!("vertex {v} is in no bag")));
            };
            let mut seen = vec![false; self.bags.len()];
            seen[start] = true;
            let mut stack = vec![start];
            let mut count = 1;
            while let Some(u) = stack.pop() {
                for &w in &adj[u] {
                    if !seen[w] && self.bags[w].contains(v) {
                        seen[w] = true;
                        count += 1;
                        stack.push(w);
                    }
                }
            }
            if count != holders.len() {
                return Err(Error::InvalidDecomposition(format!("bags containing vertex {v} are not connected")));
            }
        }
        for &(u, v) in g.edges() {
            if !self.bags.iter().any(|b| b.contains(u) && b.contains(v)) {
                return Err(Error::InvalidDecomposition(format!("edge {u}-{v} is in no bag")));
            }
        }
        Ok(())
    }

    pub fn to_spec(&self) -> GraphDecompositionSpec {
        GraphDecompositionSpec {
            bags: self.bags.iter().map(|b| b.to_vec()).collect(),
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }

    pub fn from_spec(spec: &GraphDecompositionSpec) -> Result<GraphTreeDecomposition> {
        let bags = spec
            .bags
            .iter()
            .map(|b| {
                if b.iter().any(|&x| x >= crate::subset::MAX_GROUND) {
                    Err(Error::Parse("bag element out of range".into()))
                } else {
                    Ok(Subset::from_elements(b.iter().copied()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        GraphTreeDecomposition::new(spec.edges.iter().map(|e| (e[0], e[1])).collect(), bags)
    }
}

/// JSON form: `bags[t]` lists the vertices of bag `t`; `edges` the tree edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDecompositionSpec {
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<[usize; 2]>,
}

/// Bags `V_t = ⋂ B` over the star at `t`. Requires a tame tree.
pub fn stree_to_treedecomp(universe: &Universe, tree: &STree) -> Result<GraphTreeDecomposition> {
    if universe.graph_ref().is_none() {
        return Err(Error::Precondition("not a graph universe".into()));
    }
    if let Some(t) = (0..tree.num_vertices()).find(|&t| !universe.is_star(&tree.star(t))) {
        return Err(Error::NotTame(format!("star at vertex {t}")));
    }
    let bags = (0..tree.num_vertices()).map(|t| tree.interior(t, universe.full())).collect();
    Ok(GraphTreeDecomposition { edges: tree.edges().to_vec(), bags })
}

/// Labels `α(t -> t')` by (union of bags on `t`'s side, union on `t'`'s side).
pub fn treedecomp_to_stree(g: &Graph, d: &GraphTreeDecomposition) -> Result<STree> {
    d.validate(g)?;
    let adj = tree_adjacency(d.bags.len(), &d.edges)?;
    let union = |vs: Vec<usize>| vs.into_iter().fold(Subset::EMPTY, |acc, t| acc | d.bags[t]);
    let labels =
        d.edges.iter().map(|&(u, v)| Separation::new(union(side(&adj, u, v)), union(side(&adj, v, u)))).collect();
    STree::from_edge_labels(d.bags.len(), d.edges.clone(), labels)
}

/// A matroid tree-decomposition: a tree and a map from ground elements to
/// tree vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatroidTreeDecomposition {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub tau: Vec<usize>,
}

impl MatroidTreeDecomposition {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>, tau: Vec<usize>) -> Result<MatroidTreeDecomposition> {
        tree_adjacency(vertices, &edges)?;
        if let Some(&t) = tau.iter().find(|&&t| t >= vertices) {
            return Err(Error::InvalidDecomposition(format!("element mapped to missing vertex {t}")));
        }
        Ok(MatroidTreeDecomposition { vertices, edges, tau })
    }

    pub fn single_bag(m: &Matroid) -> MatroidTreeDecomposition {
        MatroidTreeDecomposition { vertices: 1, edges: Vec::new(), tau: vec![0; m.size()] }
    }

    /// `τ⁻¹(t)`.
    pub fn bag(&self, t: usize) -> Subset {
        Subset::from_elements(self.tau.iter().enumerate().filter(|&(_, &v)| v == t).map(|(e, _)| e))
    }

    fn check(&self, m: &Matroid) -> Result<Vec<Vec<usize>>> {
        if self.tau.len() != m.size() {
            return Err(Error::InvalidDecomposition(format!(
                "tau covers {} elements, the matroid has {}",
                self.tau.len(),
                m.size()
            )));
        }
        tree_adjacency(self.vertices, &self.edges)
    }

    /// `Σ r(E ∖ τ⁻¹(T_i)) - (d-1)·r(E)` over the components `T_i` of `T - t`.
    pub fn bag_width(&self, m: &Matroid, t: usize) -> Result<Rank> {
        let adj = self.check(m)?;
        let full = Subset::full(m.size());
        let mut total = m.total_rank();
        for &w in &adj[t] {
            let part = side(&adj, w, t).into_iter().fold(Subset::EMPTY, |acc, s| acc | self.bag(s));
            total += m.rank(full - part) - m.total_rank();
        }
        Ok(total)
    }

    pub fn width(&self, m: &Matroid) -> Result<Rank> {
        (0..self.vertices).map(|t| self.bag_width(m, t)).try_fold(0, |acc, w| Ok(acc.max(w?)))
    }

    pub fn to_spec(&self) -> MatroidDecompositionSpec {
        MatroidDecompositionSpec {
            vertices: self.vertices,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
            tau: self.tau.clone(),
        }
    }

    pub fn from_spec(spec: &MatroidDecompositionSpec) -> Result<MatroidTreeDecomposition> {
        MatroidTreeDecomposition::new(
            spec.vertices,
            spec.edges.iter().map(|e| (e[0], e[1])).collect(),
            spec.tau.clone(),
        )
    }
}

/// JSON form: `tau[e]` is the tree vertex holding element `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidDecompositionSpec {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub tau: Vec<usize>,
}

/// Labels `α(t1 -> t2) = (τ⁻¹(T1), τ⁻¹(T2))`.
pub fn matroid_decomp_to_stree(m: &Matroid, d: &MatroidTreeDecomposition) -> Result<STree> {
    let adj = d.check(m)?;
    let union = |vs: Vec<usize>| vs.into_iter().fold(Subset::EMPTY, |acc, t| acc | d.bag(t));
    let labels =
        d.edges.iter().map(|&(u, v)| Separation::new(union(side(&adj, u, v)), union(side(&adj, v, u)))).collect();
    STree::from_edge_labels(d.vertices, d.edges.clone(), labels)
}

/// `τ(e)` is the unique vertex whose star has `e` in every right side.
pub fn stree_to_matroid_decomp(m: &Matroid, tree: &STree) -> Result<MatroidTreeDecomposition> {
    let universe = m.universe();
    if let Some(d) = tree.darts().find(|&d| !universe.contains(tree.label(d))) {
        return Err(Error::NotInUniverse(tree.label(d).to_string()));
    }
    let full = Subset::full(m.size());
    let interiors: Vec<Subset> = (0..tree.num_vertices()).map(|t| tree.interior(t, full)).collect();
    let mut tau = Vec::with_capacity(m.size());
    for e in 0..m.size() {
        let holders: Vec<usize> = (0..tree.num_vertices()).filter(|&t| interiors[t].contains(e)).collect();
        match holders.as_slice() {
            [t] => tau.push(*t),
            _ => return Err(Error::NotTame(format!("element {e} lies in {} interiors", holders.len()))),
        }
    }
    MatroidTreeDecomposition::new(tree.num_vertices(), tree.edges().to_vec(), tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> Subset {
        Subset::from_elements(v.iter().copied())
    }

    #[test]
    fn graph_conversions() {
        let p3 = Graph::path(3);
        let d = GraphTreeDecomposition::new(vec![(0, 1)], vec![set(&[0, 1]), set(&[1, 2])]).unwrap();
        d.validate(&p3).unwrap();
        let t = treedecomp_to_stree(&p3, &d).unwrap();
        assert_eq!(t.label(0), Separation::new(set(&[0, 1]), set(&[1, 2])));
        let u = Universe::graph(&p3).unwrap();
        assert_eq!(stree_to_treedecomp(&u, &t).unwrap(), d);
        let single = stree_to_treedecomp(&u, &STree::single_vertex()).unwrap();
        assert_eq!(single.bags, vec![set(&[0, 1, 2])]);

        let c4 = Graph::cycle(4);
        let d = GraphTreeDecomposition::new(vec![(0, 1)], vec![set(&[0, 1, 2]), set(&[0, 2, 3])]).unwrap();
        let t = treedecomp_to_stree(&c4, &d).unwrap();
        assert_eq!(t.label(0), Separation::new(set(&[0, 1, 2]), set(&[0, 2, 3])));
        assert_eq!(d.width(), 2);
    }

    #[test]
    fn invalid_decompositions() {
        let p3 = Graph::path(3);
        let missing_edge = GraphTreeDecomposition::new(vec![(0, 1)], vec![set(&[0]), set(&[1, 2])]).unwrap();
        assert!(missing_edge.validate(&p3).is_err());
        let broken =
            GraphTreeDecomposition::new(vec![(0, 1), (1, 2)], vec![set(&[0, 1]), set(&[2]), set(&[1, 2])]).unwrap();
        assert!(broken.validate(&p3).is_err());
        assert!(GraphTreeDecomposition::new(vec![], vec![set(&[0]), set(&[1])]).is_err());
    }

    #[test]
    fn matroid_conversions() {
        let m = Matroid::graphic(&Graph::complete(3)).unwrap();
        let single = MatroidTreeDecomposition::single_bag(&m);
        assert_eq!(single.width(&m).unwrap(), 2);
        let t = matroid_decomp_to_stree(&m, &single).unwrap();
        assert_eq!(t.num_vertices(), 1);

        let d = MatroidTreeDecomposition::new(2, vec![(0, 1)], vec![0, 1, 1]).unwrap();
        let t = matroid_decomp_to_stree(&m, &d).unwrap();
        assert_eq!(t.label(0), Separation::new(set(&[0]), set(&[1, 2])));
        assert_eq!(d.bag_width(&m, 0).unwrap(), 1);
        assert_eq!(d.bag_width(&m, 1).unwrap(), 2);
        let u = m.universe();
        for v in 0..2 {
            assert_eq!(d.bag_width(&m, v).unwrap(), u.star_size_unchecked(&t.star(v)));
        }
        assert_eq!(stree_to_matroid_decomp(&m, &t).unwrap(), d);

        let empty_bag = MatroidTreeDecomposition::new(3, vec![(0, 1), (1, 2)], vec![0, 2, 2]).unwrap();
        assert_eq!(empty_bag.bag(1), Subset::EMPTY);
        assert!(empty_bag.width(&m).is_ok());
        assert!(MatroidTreeDecomposition::new(1, vec![], vec![0, 3]).is_err());
    }
}
