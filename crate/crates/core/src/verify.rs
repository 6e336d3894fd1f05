//! Exhaustive checks of the linked and lean properties.
//!
//! Every verifier returns a report `{property, pass, witness?, counts}`.
//! Path counts use vertex-disjoint paths in which a vertex lying in both
//! terminal sets is a path of length zero.

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use serde_json::{json, Value};

use crate::decomposition::{GraphTreeDecomposition, MatroidTreeDecomposition};
use crate::error::{Error, Result};
use crate::family::{StarFamily, StarFamilyKind};
use crate::flow::menger_within;
use crate::graph::Graph;
use crate::matroid::Matroid;
use crate::rank::Rank;
use crate::separation::{Separation, Universe};
use crate::stree::STree;
use crate::subset::Subset;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub property: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub counts: Value,
}

impl Report {
    fn new(property: &str, witness: Option<Value>, counts: Value) -> Report {
        Report { property: property.into(), pass: witness.is_none(), witness, counts }
    }
}

/// Default limit on the number of `(Z1, Z2)` pairs a lean check may examine.
pub const DEFAULT_PAIR_BUDGET: usize = 20_000_000;

fn tree_adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, i));
        adj[v].push((u, i));
    }
    adj
}

/// For every target vertex, the smallest value of `weight(edge)` on the
/// tree path from `t`; `None` for `t` itself.
fn path_minimum<W: Fn(usize) -> Rank>(adj: &[Vec<(usize, usize)>], t: usize, weight: W) -> Vec<Option<Rank>> {
    let mut out = vec![None; adj.len()];
    let mut stack = vec![(t, usize::MAX)];
    let mut seen = vec![false; adj.len()];
    seen[t] = true;
    while let Some((u, _)) = stack.pop() {
        for &(w, e) in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                let m = weight(e);
                out[w] = Some(out[u].map_or(m, |x: Rank| x.min(m)));
                stack.push((w, e));
            }
        }
    }
    out
}

/// For all bags `V_t, V_t'`: `G` has `k` disjoint `V_t`-`V_t'` paths for
/// every `k` up to the smallest adhesion on the tree path between them.
pub fn verify_linked_td(g: &Graph, d: &GraphTreeDecomposition) -> Result<Report> {
    d.validate(g)?;
    let adj = tree_adjacency(d.bags.len(), &d.edges);
    let full = g.vertex_set();
    let mut seen = HashSet::new();
    let mut checked = 0;
    for t in 0..d.bags.len() {
        let minima = path_minimum(&adj, t, |e| d.adhesion(e).len() as Rank);
        for (t2, min) in minima.iter().enumerate().skip(t + 1) {
            let need = min.expect("distinct vertices");
            if !seen.insert((d.bags[t], d.bags[t2], need)) {
                continue;
            }
            checked += 1;
            let (paths, cut) = menger_within(g, d.bags[t], d.bags[t2], full);
            if (paths as Rank) < need {
                let witness = json!({"t": t, "t2": t2, "k": need, "paths": paths, "cut": cut.to_vec()});
                return Ok(Report::new("linked", Some(witness), json!({"pairs": checked})));
            }
        }
    }
    Ok(Report::new("linked", None, json!({"pairs": checked})))
}

fn lean_graph(
    g: &Graph,
    d: &GraphTreeDecomposition,
    theta: Option<usize>,
    budget: usize,
    property: &str,
) -> Result<Report> {
    d.validate(g)?;
    let adj = tree_adjacency(d.bags.len(), &d.edges);
    let full = g.vertex_set();
    let mut seen = HashSet::new();
    let mut memo: HashMap<(Subset, Subset), usize> = HashMap::new();
    let mut pairs = 0usize;
    for t in 0..d.bags.len() {
        let minima = path_minimum(&adj, t, |e| d.adhesion(e).len() as Rank);
        for (t2, min) in minima.iter().enumerate().skip(t) {
            let bound = min.unwrap_or(Rank::MAX);
            if !seen.insert((d.bags[t], d.bags[t2], bound)) {
                continue;
            }
            let top = d.bags[t].len().min(d.bags[t2].len());
            let top = theta.map_or(top, |th| top.min(th.saturating_sub(1)));
            for k in 1..=top {
                if (k as Rank) > bound {
                    // Some adhesion on the path is already below k.
                    break;
                }
                for z1 in d.bags[t].subsets_of_size(k) {
                    for z2 in d.bags[t2].subsets_of_size(k) {
                        pairs += 1;
                        if pairs > budget {
                            return Err(Error::BudgetExceeded(budget));
                        }
                        let key = if z1 <= z2 { (z1, z2) } else { (z2, z1) };
                        let paths = *memo.entry(key).or_insert_with(|| menger_within(g, z1, z2, full).0);
                        if paths < k {
                            let witness =
                                json!({"t": t, "t2": t2, "k": k, "z1": z1.to_vec(), "z2": z2.to_vec(), "paths": paths});
                            return Ok(Report::new(property, Some(witness), json!({"pairs": pairs})));
                        }
                    }
                }
            }
        }
    }
    Ok(Report::new(property, None, json!({"pairs": pairs, "flows": memo.len()})))
}

/// For all bags `V_t, V_t'`, all `k` and all `Z1 ⊆ V_t`, `Z2 ⊆ V_t'` of
/// size `k`: `k` disjoint `Z1`-`Z2` paths, or an adhesion `< k` on the path.
pub fn verify_lean_td(g: &Graph, d: &GraphTreeDecomposition, budget: usize) -> Result<Report> {
    lean_graph(g, d, None, budget, "lean")
}

/// `verify_lean_td` restricted to `k < theta`.
pub fn verify_theta_lean(g: &Graph, d: &GraphTreeDecomposition, theta: usize, budget: usize) -> Result<Report> {
    lean_graph(g, d, Some(theta), budget, "theta-lean")
}

/// Largest matroid accepted by `verify_matroid_lean`.
pub const MATROID_VERIFY_CAP: usize = 10;

/// For all tree vertices `t, t'` and disjoint `Z1 ⊆ τ⁻¹(t)`, `Z2 ⊆ τ⁻¹(t')`
/// with `r(Z1) = r(Z2) = k`: `λ(Z1, Z2) >= k`, or some edge on the path
/// induces a bipartition of connectivity `< k`.
pub fn verify_matroid_lean(m: &Matroid, d: &MatroidTreeDecomposition) -> Result<Report> {
    if m.size() > MATROID_VERIFY_CAP {
        return Err(Error::OverCap { size: m.size(), cap: MATROID_VERIFY_CAP });
    }
    let tree = crate::decomposition::matroid_decomp_to_stree(m, d)?;
    let universe = m.universe();
    let adj = tree_adjacency(d.vertices, &d.edges);
    let orders: Vec<Rank> = (0..tree.num_edges()).map(|e| universe.order(tree.label(2 * e))).collect();
    let full = Subset::full(m.size());
    let mut memo: HashMap<(Subset, Subset), Rank> = HashMap::new();
    let mut pairs = 0;
    for t in 0..d.vertices {
        let minima = path_minimum(&adj, t, |e| orders[e]);
        for (t2, min) in minima.iter().enumerate().skip(t) {
            let bound = min.unwrap_or(Rank::MAX);
            for z1 in d.bag(t).subsets() {
                let k = m.rank(z1);
                if k == 0 || k > bound {
                    continue;
                }
                for z2 in (d.bag(t2) - z1).subsets() {
                    if m.rank(z2) != k {
                        continue;
                    }
                    pairs += 1;
                    let lam = *memo.entry((z1, z2)).or_insert_with(|| {
                        universe
                            .lambda_interval(Separation::new(z1, full - z1), Separation::new(full - z2, z2))
                            .expect("disjoint sets give a nonempty interval")
                            .0
                    });
                    if lam < k {
                        let witness =
                            json!({"t": t, "t2": t2, "k": k, "z1": z1.to_vec(), "z2": z2.to_vec(), "lambda": lam});
                        return Ok(Report::new("matroid-lean", Some(witness), json!({"pairs": pairs})));
                    }
                }
            }
        }
    }
    Ok(Report::new("matroid-lean", None, json!({"pairs": pairs})))
}

/// Definition check on an S-tree: for all darts `e <= f`, `λ(α(e), α(f))`
/// equals the least label order between them. λ is computed by
/// enumerating the interval.
pub fn verify_linked_stree(universe: &Universe, tree: &STree) -> Result<Report> {
    let mut checked = 0;
    let mut memo: HashMap<(Separation, Separation), Rank> = HashMap::new();
    for e in tree.darts() {
        for f in tree.darts_above(e) {
            checked += 1;
            let m =
                tree.darts_between(e, f).into_iter().map(|g| universe.order(tree.label(g))).min().expect("nonempty");
            let key = (tree.label(e), tree.label(f));
            let lam = match memo.get(&key) {
                Some(&v) => v,
                None => {
                    let v = universe.lambda_interval(key.0, key.1)?.0;
                    memo.insert(key, v);
                    v
                }
            };
            if lam < m {
                let witness = json!({"e": e, "f": f, "lambda": lam, "min_order": m});
                return Ok(Report::new("linked-stree", Some(witness), json!({"pairs": checked})));
            }
        }
    }
    Ok(Report::new("linked-stree", None, json!({"pairs": checked})))
}

/// Definition check for leanness of an S-tree over `family`, quantifying
/// over canonical addable separations, or over every addable separation
/// when `exhaustive_cap` is given and the ground set is within it.
pub fn verify_lean_stree(
    universe: &Universe,
    tree: &STree,
    family: &StarFamilyKind,
    exhaustive_cap: Option<usize>,
    budget: usize,
) -> Result<Report> {
    let n = tree.num_vertices();
    let candidates: Vec<Vec<Separation>> = (0..n)
        .map(|t| match exhaustive_cap {
            Some(cap) => family.addable_exhaustive(universe, tree, t, cap),
            None => family.addable_candidates(universe, tree, t, budget),
        })
        .collect::<Result<_>>()?;
    let mut memo: HashMap<(Separation, Separation), Rank> = HashMap::new();
    let mut pairs = 0;
    let rank = universe.rank();
    for t in 0..n {
        for t2 in t..n {
            let path_min =
                tree.path_darts(t, t2).into_iter().map(|d| universe.order(tree.label(d))).min().unwrap_or(Rank::MAX);
            for &a in &candidates[t] {
                for &b in &candidates[t2] {
                    if !a.leq(b.invert()) {
                        continue;
                    }
                    pairs += 1;
                    let key = (a, b.invert());
                    let lam = match memo.get(&key) {
                        Some(&v) => v,
                        None => {
                            let v = universe.lambda_interval(key.0, key.1)?.0;
                            memo.insert(key, v);
                            v
                        }
                    };
                    if lam < rank.rank(a.left).min(rank.rank(b.left)) && path_min > lam {
                        let witness = json!({
                            "t": t, "t2": t2,
                            "add": [a.left.to_vec(), a.right.to_vec()],
                            "add2": [b.left.to_vec(), b.right.to_vec()],
                            "lambda": lam,
                        });
                        return Ok(Report::new("lean-stree", Some(witness), json!({"pairs": pairs})));
                    }
                }
            }
        }
    }
    Ok(Report::new("lean-stree", None, json!({"pairs": pairs, "family": family.name()})))
}

/// Subdivides every tree edge `ss'` by a new vertex with bag `V_s ∩ V_s'`.
/// New vertex `n + i` subdivides edge `i`.
pub fn subdivide_edges(d: &GraphTreeDecomposition) -> GraphTreeDecomposition {
    let n = d.bags.len();
    let mut bags = d.bags.clone();
    let mut edges = Vec::with_capacity(2 * d.edges.len());
    for (i, &(u, v)) in d.edges.iter().enumerate() {
        bags.push(d.adhesion(i));
        edges.push((u, n + i));
        edges.push((n + i, v));
    }
    GraphTreeDecomposition { edges, bags }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> Subset {
        Subset::from_elements(v.iter().copied())
    }

    #[test]
    fn p3_optimal_is_linked_and_lean() {
        let g = Graph::path(3);
        let d = GraphTreeDecomposition::new(vec![(0, 1)], vec![set(&[0, 1]), set(&[1, 2])]).unwrap();
        assert!(verify_linked_td(&g, &d).unwrap().pass);
        assert!(verify_lean_td(&g, &d, DEFAULT_PAIR_BUDGET).unwrap().pass);
        let single = GraphTreeDecomposition::single_bag(&g);
        assert!(verify_linked_td(&g, &single).unwrap().pass);
        assert!(!verify_lean_td(&g, &single, DEFAULT_PAIR_BUDGET).unwrap().pass);
    }

    #[test]
    fn c4_two_bags_is_lean() {
        let g = Graph::cycle(4);
        let d = GraphTreeDecomposition::new(vec![(0, 1)], vec![set(&[0, 1, 2]), set(&[0, 2, 3])]).unwrap();
        assert!(verify_lean_td(&g, &d, DEFAULT_PAIR_BUDGET).unwrap().pass);
    }

    #[test]
    fn k4_with_pendant_single_bag_is_not_lean() {
        let g = Graph::new(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)]).unwrap();
        let r = verify_lean_td(&g, &GraphTreeDecomposition::single_bag(&g), DEFAULT_PAIR_BUDGET).unwrap();
        assert!(!r.pass);
        assert!(r.witness.is_some());
    }

    #[test]
    fn triangles_joined_by_one_edge_are_not_linked() {
        // The end bags have adhesion 3 to the middle bag but only one
        // disjoint path between them.
        let g = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap();
        let d =
            GraphTreeDecomposition::new(vec![(0, 1), (1, 2)], vec![set(&[0, 1, 2]), g.vertex_set(), set(&[3, 4, 5])])
                .unwrap();
        let r = verify_linked_td(&g, &d).unwrap();
        assert!(!r.pass);
        assert_eq!(r.witness.unwrap()["paths"], 1);
        let d = GraphTreeDecomposition::new(vec![(0, 1)], vec![set(&[0, 1, 2]), set(&[2, 3, 4, 5])]).unwrap();
        assert!(verify_linked_td(&g, &d).unwrap().pass);
    }

    #[test]
    fn subdivision_keeps_validity_and_adds_adhesion_bags() {
        let g = Graph::path(3);
        let d = GraphTreeDecomposition::new(vec![(0, 1)], vec![set(&[0, 1]), set(&[1, 2])]).unwrap();
        let s = subdivide_edges(&d);
        assert_eq!(s.bags.len(), 3);
        assert_eq!(s.bags[2], set(&[1]));
        s.validate(&g).unwrap();
        assert!(verify_linked_td(&g, &s).unwrap().pass);
    }

    #[test]
    fn matroid_leanness() {
        let m = Matroid::graphic(&Graph::complete(3)).unwrap();
        let d = MatroidTreeDecomposition::new(2, vec![(0, 1)], vec![0, 1, 1]).unwrap();
        assert!(verify_matroid_lean(&m, &d).unwrap().pass);
        let u13 = Matroid::uniform(1, 3).unwrap();
        assert!(verify_matroid_lean(&u13, &MatroidTreeDecomposition::single_bag(&u13)).unwrap().pass);
    }
}
