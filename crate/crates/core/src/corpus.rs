//! Instance corpora: small graphs up to isomorphism, seeded random graphs,
//! small matroids, and start trees for the restricted star families.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matroid::Matroid;
use crate::separation::{Separation, Universe};
use crate::stree::STree;
use crate::subset::Subset;

/// Largest vertex count handled by `graphs_up_to_iso`.
pub const ISO_CAP: usize = 8;

/// Adjacency rows packed into one word, row `i` at bits `i*n..(i+1)*n`.
fn pack(n: usize, adj: &[u32], perm: &[usize]) -> u64 {
    // perm[new] = old
    let mut out = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            if adj[perm[i]] >> perm[j] & 1 == 1 {
                out |= 1 << (i * n + j - (i + 1) * (i + 2) / 2);
            }
        }
    }
    out
}

/// A canonical code for `g` up to isomorphism: the least packed upper
/// triangle over all vertex orders compatible with a degree refinement.
pub fn canonical_code(g: &Graph) -> Result<u64> {
    let n = g.num_vertices();
    if n > ISO_CAP {
        return Err(Error::OverCap { size: n, cap: ISO_CAP });
    }
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).bits() as u32).collect();
    // Refine by degree, then by the sorted degrees of neighbours.
    let deg: Vec<usize> = (0..n).map(|v| adj[v].count_ones() as usize).collect();
    let key: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<usize> = (0..n).filter(|&u| adj[v] >> u & 1 == 1).map(|u| deg[u]).collect();
            nd.sort_unstable();
            (deg[v], nd)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| key[a].cmp(&key[b]));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match cells.last_mut() {
            Some(c) if key[c[0]] == key[v] => c.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let mut best = u64::MAX;
    let mut perm = Vec::with_capacity(n);
    search(&cells, 0, &mut perm, &mut vec![false; n], &mut |p| best = best.min(pack(n, &adj, p)));
    Ok(best | (n as u64) << 58)
}

fn search(
    cells: &[Vec<usize>],
    cell: usize,
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if cell == cells.len() {
        visit(perm);
        return;
    }
    let placed_in_cell = perm.len() - cells[..cell].iter().map(Vec::len).sum::<usize>();
    if placed_in_cell == cells[cell].len() {
        search(cells, cell + 1, perm, used, visit);
        return;
    }
    for &v in &cells[cell] {
        if !used[v] {
            used[v] = true;
            perm.push(v);
            search(cells, cell, perm, used, visit);
            perm.pop();
            used[v] = false;
        }
    }
}

/// One representative of every isomorphism class of graphs on `n`
/// vertices, generated by adding edges one at a time.
pub fn graphs_up_to_iso(n: usize) -> Result<Vec<Graph>> {
    let mut layer = vec![Graph::empty(n)?];
    let mut all = layer.clone();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    while !layer.is_empty() {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for g in &layer {
            for &(u, v) in &pairs {
                if g.has_edge(u, v) {
                    continue;
                }
                let mut edges = g.edges().to_vec();
                edges.push((u, v));
                let h = Graph::new(n, &edges)?;
                if seen.insert(canonical_code(&h)?) {
                    next.push(h);
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    Ok(all)
}

/// Connected graphs on `lo..=hi` vertices, one per isomorphism class.
pub fn connected_graphs(lo: usize, hi: usize) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for n in lo..=hi {
        out.extend(graphs_up_to_iso(n)?.into_iter().filter(Graph::is_connected));
    }
    Ok(out)
}

/// `count` connected graphs `G(n, 1/2)` drawn from a seeded generator.
pub fn random_connected_graphs(n: usize, count: usize, seed: u64) -> Result<Vec<Graph>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(0.5)).collect::<Vec<_>>();
        let g = Graph::new(n, &edges)?;
        if g.is_connected() {
            out.push(g);
        }
    }
    Ok(out)
}

/// Cycle matroids of all connected graphs with at least one and at most
/// `max_edges` edges, one per graph isomorphism class.
pub fn graphic_matroids(max_edges: usize) -> Result<Vec<(Graph, Matroid)>> {
    let mut out = Vec::new();
    for g in connected_graphs(2, max_edges + 1)? {
        if g.num_edges() >= 1 && g.num_edges() <= max_edges {
            let m = Matroid::graphic(&g)?;
            out.push((g, m));
        }
    }
    Ok(out)
}

/// `count` random GF(2) column matroids on `size` elements with up to
/// `rows` rows, from a seeded generator.
pub fn random_binary_matroids(count: usize, size: usize, rows: usize, seed: u64) -> Result<Vec<Matroid>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let matrix = (0..rows).map(|_| (0..size).map(|_| rng.gen_range(0..2)).collect()).collect();
            Matroid::linear(matrix, 2)
        })
        .collect()
}

/// A named matroid instance.
pub struct NamedMatroid {
    pub name: String,
    pub matroid: Matroid,
}

/// Cycle matroids of connected graphs with at most 6 edges, `U(2,4)`,
/// `U(2,5)` and five random binary matroids on at most 6 elements.
pub fn matroid_corpus(seed: u64) -> Result<Vec<NamedMatroid>> {
    let mut out = Vec::new();
    for (g, m) in graphic_matroids(6)? {
        let edges: Vec<String> = g.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
        out.push(NamedMatroid { name: format!("M({})", edges.join(" ")), matroid: m });
    }
    out.push(NamedMatroid { name: "U(2,4)".into(), matroid: Matroid::uniform(2, 4)? });
    out.push(NamedMatroid { name: "U(2,5)".into(), matroid: Matroid::uniform(2, 5)? });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (i, m) in (0..5).map(|i| (i, rng.gen_range(3..=6))).collect::<Vec<_>>() {
        let rows = 3.min(m);
        let b = random_binary_matroids(1, m, rows, seed.wrapping_add(i as u64 + 1))?.remove(0);
        out.push(NamedMatroid { name: format!("binary-{i}"), matroid: b });
    }
    Ok(out)
}

/// A caterpillar branch-decomposition: a spine of `m - 2` cubic vertices
/// with one leaf per graph edge, taken in order along the spine. Leaf
/// labels have the edge's endpoints as small side; spine edges separate
/// the vertices touched by the first edges from those touched by the rest.
pub fn caterpillar_branch_stree(g: &Graph) -> Result<STree> {
    let m = g.num_edges();
    if m < 3 {
        return Err(Error::Precondition("caterpillar needs at least three edges".into()));
    }
    let edges = g.edges();
    let touched = |range: std::ops::Range<usize>| {
        edges[range].iter().fold(Subset::EMPTY, |acc, &(u, v)| acc | Subset::from_elements([u, v]))
    };
    // Spine vertex i carries the leaf of edge i + 1; the ends also carry
    // edges 0 and m - 1.
    let spine = m - 2;
    let mut tree_edges = Vec::new();
    let mut labels = Vec::new();
    for i in 0..spine.saturating_sub(1) {
        tree_edges.push((i, i + 1));
        labels.push(Separation::new(touched(0..i + 2), touched(i + 2..m)));
    }
    let leaf = |j: usize| spine + j;
    let attach = |j: usize| {
        if j == 0 {
            0
        } else if j == m - 1 {
            spine - 1
        } else {
            j - 1
        }
    };
    for j in 0..m {
        let (u, v) = edges[j];
        let rest: Vec<usize> = (0..m).filter(|&x| x != j).collect();
        let other = rest.iter().fold(Subset::EMPTY, |acc, &x| acc | Subset::from_elements([edges[x].0, edges[x].1]));
        tree_edges.push((leaf(j), attach(j)));
        labels.push(Separation::new(Subset::from_elements([u, v]), other));
    }
    STree::from_edge_labels(spine + m, tree_edges, labels)
}

/// A path S-tree with one vertex per bag; edge `i`-`(i+1)` separates the
/// union of the first `i + 1` bags from the union of the rest.
pub fn path_stree(g: &Graph, bags: &[Subset]) -> Result<STree> {
    let universe = Universe::graph(g)?;
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    for i in 0..bags.len().saturating_sub(1) {
        let left = bags[..=i].iter().fold(Subset::EMPTY, |a, &b| a | b);
        let right = bags[i + 1..].iter().fold(Subset::EMPTY, |a, &b| a | b);
        let s = Separation::new(left, right);
        universe.check(s)?;
        edges.push((i, i + 1));
        labels.push(s);
    }
    STree::from_edge_labels(bags.len().max(1), edges, labels)
}

/// Path-decomposition bags of a vertex order: bag `i` holds `v_i` and every
/// earlier vertex with a neighbour among `v_i, v_{i+1}, ...`.
pub fn vertex_order_bags(g: &Graph, order: &[usize]) -> Vec<Subset> {
    let mut bags = Vec::with_capacity(order.len());
    for i in 0..order.len() {
        let suffix = Subset::from_elements(order[i..].iter().copied());
        let earlier = order[..i].iter().copied().filter(|&u| !(g.neighbors(u) & suffix).is_empty());
        bags.push(Subset::from_elements(earlier) | Subset::singleton(order[i]));
    }
    bags
}

/// The matroid decomposition on a path with element `i` at vertex `i`.
pub fn element_path_decomposition(m: &Matroid) -> Result<crate::decomposition::MatroidTreeDecomposition> {
    let n = m.size().max(1);
    crate::decomposition::MatroidTreeDecomposition::new(
        n,
        (1..n).map(|i| (i - 1, i)).collect(),
        (0..m.size()).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_counts_match_known_totals() {
        // Graphs up to isomorphism on 1..=6 vertices: 1, 2, 4, 11, 34, 156.
        let totals: Vec<usize> = (1..=6).map(|n| graphs_up_to_iso(n).unwrap().len()).collect();
        assert_eq!(totals, vec![1, 2, 4, 11, 34, 156]);
        // Connected graphs on 3..=6 vertices: 2, 6, 21, 112.
        let connected: Vec<usize> = (3..=6).map(|n| connected_graphs(n, n).unwrap().len()).collect();
        assert_eq!(connected, vec![2, 6, 21, 112]);
    }

    #[test]
    fn canonical_code_is_invariant() {
        let a = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let b = Graph::new(4, &[(2, 0), (0, 3), (3, 1)]).unwrap();
        let star = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(canonical_code(&a).unwrap(), canonical_code(&b).unwrap());
        assert_ne!(canonical_code(&a).unwrap(), canonical_code(&star).unwrap());
    }

    #[test]
    fn random_graphs_are_deterministic() {
        let a = random_connected_graphs(8, 3, 7).unwrap();
        let b = random_connected_graphs(8, 3, 7).unwrap();
        assert_eq!(
            a.iter().map(|g| g.edges().to_vec()).collect::<Vec<_>>(),
            b.iter().map(|g| g.edges().to_vec()).collect::<Vec<_>>()
        );
        assert!(a.iter().all(Graph::is_connected));
    }

    #[test]
    fn caterpillar_is_a_tame_branch_tree() {
        use crate::family::{validate_stree, StarFamilyKind};
        let g = Graph::complete(4);
        let t = caterpillar_branch_stree(&g).unwrap();
        let u = Universe::graph(&g).unwrap();
        let k = t.max_order(&u).max(2) + 1;
        let fam = StarFamilyKind::Tk { k };
        let report = validate_stree(&u, &t, Some(&fam));
        assert!(report.valid, "{report:?}");
    }

    #[test]
    fn path_trees() {
        let g = Graph::path(4);
        let bags = [Subset::from_elements([0, 1]), Subset::from_elements([1, 2]), Subset::from_elements([2, 3])];
        let t = path_stree(&g, &bags).unwrap();
        assert_eq!(t.num_vertices(), 3);
        assert!(path_stree(&g, &[Subset::from_elements([0, 1]), Subset::from_elements([2, 3])]).is_err());
    }

    #[test]
    fn vertex_order_path_decomposition() {
        let g = Graph::cycle(4);
        let bags = vertex_order_bags(&g, &[0, 1, 2, 3]);
        assert_eq!(
            bags,
            vec![
                Subset::from_elements([0]),
                Subset::from_elements([0, 1]),
                Subset::from_elements([0, 1, 2]),
                Subset::from_elements([0, 2, 3])
            ]
        );
        assert!(path_stree(&g, &bags).is_ok());
    }

    #[test]
    fn matroid_corpus_contents() {
        let c = matroid_corpus(1).unwrap();
        assert!(c.iter().any(|m| m.name == "U(2,4)"));
        assert!(c.iter().all(|m| m.matroid.size() <= 6));
        assert_eq!(c.iter().filter(|m| m.name.starts_with("binary")).count(), 5);
    }
}
