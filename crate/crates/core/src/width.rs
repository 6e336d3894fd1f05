//! Exact widths by exhaustive dynamic programming over subsets.

use crate::decomposition::{GraphTreeDecomposition, MatroidTreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matroid::Matroid;
use crate::rank::Rank;
use crate::subset::Subset;

/// Largest graph accepted by the tree-width and path-width oracles.
pub const VERTEX_CAP: usize = 16;
/// Largest ground set accepted by the branch-width and matroid oracles.
pub const ELEMENT_CAP: usize = 12;

fn cap(size: usize, cap: usize) -> Result<()> {
    if size > cap {
        return Err(Error::OverCap { size, cap });
    }
    Ok(())
}

/// Vertices outside `eliminated ∪ {v}` reachable from `v` through `eliminated`.
fn elimination_neighbourhood(g: &Graph, eliminated: Subset, v: usize) -> usize {
    let inner = g.reach(Subset::singleton(v), eliminated | Subset::singleton(v));
    g.boundary(inner).len()
}

/// Tree-width via `TW(S) = min_v max(TW(S - v), |Q(S - v, v)|)` over
/// elimination prefixes.
pub fn brute_force_treewidth(g: &Graph) -> Result<usize> {
    Ok(treewidth_table(g)?.0)
}

/// The DP value together with, for every prefix, the vertex eliminated last.
fn treewidth_table(g: &Graph) -> Result<(usize, Vec<usize>)> {
    let n = g.num_vertices();
    cap(n, VERTEX_CAP)?;
    let mut tw = vec![usize::MAX; 1 << n];
    let mut last = vec![0; 1 << n];
    tw[0] = 0;
    for s in 1usize..(1 << n) {
        let set = Subset(s as u64);
        for v in set.iter() {
            let rest = set - Subset::singleton(v);
            let w = tw[rest.bits() as usize].max(elimination_neighbourhood(g, rest, v));
            if w < tw[s] {
                tw[s] = w;
                last[s] = v;
            }
        }
    }
    Ok((if n == 0 { 0 } else { tw[(1 << n) - 1] }, last))
}

/// An optimal elimination order.
pub fn optimal_elimination_order(g: &Graph) -> Result<Vec<usize>> {
    let (_, last) = treewidth_table(g)?;
    let mut order = Vec::with_capacity(g.num_vertices());
    let mut set = g.vertex_set();
    while !set.is_empty() {
        let v = last[set.bits() as usize];
        order.push(v);
        set = set - Subset::singleton(v);
    }
    order.reverse();
    Ok(order)
}

/// The tree-decomposition of an elimination order: vertex `v` gets the bag
/// `{v}` plus its later neighbours in the filled graph, attached to the bag
/// of the earliest of them. Roots of separate components form a path.
pub fn elimination_decomposition(g: &Graph, order: &[usize]) -> Result<GraphTreeDecomposition> {
    let n = g.num_vertices();
    if order.len() != n {
        return Err(Error::Precondition("elimination order must list every vertex once".into()));
    }
    let mut position = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || position[v] != usize::MAX {
            return Err(Error::Precondition("elimination order must list every vertex once".into()));
        }
        position[v] = i;
    }
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    let mut eliminated = Subset::EMPTY;
    for (i, &v) in order.iter().enumerate() {
        let inner = g.reach(Subset::singleton(v), eliminated | Subset::singleton(v));
        let later = g.boundary(inner);
        bags.push(later | Subset::singleton(v));
        match later.iter().min_by_key(|&u| position[u]) {
            Some(u) => edges.push((i, position[u])),
            None => roots.push(i),
        }
        eliminated = eliminated | Subset::singleton(v);
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    GraphTreeDecomposition::new(edges, bags)
}

/// A tree-decomposition of width `brute_force_treewidth(g)`.
pub fn optimal_tree_decomposition(g: &Graph) -> Result<GraphTreeDecomposition> {
    if g.num_vertices() == 0 {
        return Ok(GraphTreeDecomposition::single_bag(g));
    }
    elimination_decomposition(g, &optimal_elimination_order(g)?)
}

/// Path-width as vertex separation number: the best linear order
/// minimising the largest number of placed vertices with an unplaced
/// neighbour.
pub fn brute_force_pathwidth(g: &Graph) -> Result<usize> {
    let n = g.num_vertices();
    cap(n, VERTEX_CAP)?;
    let full = g.vertex_set();
    let mut f = vec![usize::MAX; 1 << n];
    f[0] = 0;
    for s in 1usize..(1 << n) {
        let set = Subset(s as u64);
        let frontier = g.boundary(full - set).len();
        let best = set.iter().map(|v| f[(set - Subset::singleton(v)).bits() as usize]).min().expect("nonempty");
        f[s] = best.max(frontier);
    }
    Ok(f[(1 << n) - 1])
}

/// Minimum over cubic trees with leaves labelled by the ground set of the
/// largest connectivity `conn(F)` of an edge split. Ground sets of size 0
/// or 1 have width 0.
fn branch_width_by(size: usize, conn: impl Fn(Subset) -> Rank) -> Rank {
    if size <= 1 {
        return 0;
    }
    let full = Subset::full(size);
    // w[F]: best width of a subcubic tree whose leaves are F, counting the
    // connectivity of every split strictly inside it.
    let mut w = vec![Rank::MAX; 1 << size];
    for s in 1usize..(1 << size) {
        let set = Subset(s as u64);
        if set.len() == 1 {
            w[s] = 0;
            continue;
        }
        let low = Subset::singleton(set.first().expect("nonempty"));
        let mut best = Rank::MAX;
        for part in (set - low).subsets() {
            let a = part | low;
            if a == set {
                continue;
            }
            let b = set - a;
            let cost = conn(a).max(conn(b)).max(w[a.bits() as usize]).max(w[b.bits() as usize]);
            best = best.min(cost);
        }
        w[s] = best;
    }
    // The root edge splits E into F and E - F.
    let low = Subset::singleton(0);
    let mut best = Rank::MAX;
    for part in (full - low).subsets() {
        let a = part | low;
        if a == full {
            continue;
        }
        let b = full - a;
        best = best.min(conn(a).max(w[a.bits() as usize]).max(w[b.bits() as usize]));
    }
    best
}

/// Branch-width of a graph: edge splits are measured by the number of
/// vertices incident with edges on both sides.
pub fn brute_force_branchwidth(g: &Graph) -> Result<usize> {
    let m = g.num_edges();
    cap(m, ELEMENT_CAP)?;
    let edges = g.edges().to_vec();
    let touched =
        |f: Subset| f.iter().fold(Subset::EMPTY, |acc, e| acc | Subset::from_elements([edges[e].0, edges[e].1]));
    let full = Subset::full(m);
    Ok(branch_width_by(m, |f| (touched(f) & touched(full - f)).len() as Rank) as usize)
}

/// Branch-width of a matroid under the connectivity `λ(X)`.
pub fn brute_force_matroid_branchwidth(m: &Matroid) -> Result<usize> {
    cap(m.size(), ELEMENT_CAP)?;
    Ok(branch_width_by(m.size(), |x| m.connectivity(x)) as usize)
}

/// Matroid tree-width: the least `w` admitting a tree and a map `τ` from
/// elements to tree vertices whose bag widths are all at most `w`.
pub fn brute_force_matroid_treewidth(m: &Matroid) -> Result<usize> {
    Ok(matroid_treewidth_search(m)?.0)
}

/// A matroid tree-decomposition of width `brute_force_matroid_treewidth(m)`.
pub fn optimal_matroid_decomposition(m: &Matroid) -> Result<MatroidTreeDecomposition> {
    matroid_treewidth_search(m)?.1.build(m)
}

/// How the least-cost family inside a set treats its first element.
#[derive(Clone, Copy)]
enum Pick {
    /// Left uncovered.
    Skip,
    /// Covered by this feasible child set.
    Child(Subset),
    /// The set is itself the only child.
    Whole,
}

struct MatroidTables {
    g_pick: Vec<Pick>,
    best_pick: Vec<Pick>,
}

impl MatroidTables {
    fn family(&self, set: Subset, top: bool) -> Vec<Subset> {
        let mut out = Vec::new();
        let mut rest = set;
        let mut top = top;
        while let Some(x) = rest.first() {
            let pick = if top { self.best_pick[rest.bits() as usize] } else { self.g_pick[rest.bits() as usize] };
            top = false;
            match pick {
                Pick::Skip => rest = rest - Subset::singleton(x),
                Pick::Child(y) => {
                    out.push(y);
                    rest = rest - y;
                }
                Pick::Whole => {
                    out.push(rest);
                    rest = Subset::EMPTY;
                }
            }
        }
        out
    }

    fn build(&self, m: &Matroid) -> Result<MatroidTreeDecomposition> {
        let mut tau = vec![0; m.size()];
        let mut edges = Vec::new();
        let mut vertices = 0;
        let mut stack = vec![(Subset::full(m.size()), None::<usize>)];
        while let Some((set, parent)) = stack.pop() {
            let v = vertices;
            vertices += 1;
            if let Some(p) = parent {
                edges.push((p, v));
            }
            let children = self.family(set, true);
            let covered = children.iter().fold(Subset::EMPTY, |a, &c| a | c);
            for e in (set - covered).iter() {
                tau[e] = v;
            }
            for c in children.into_iter().rev() {
                stack.push((c, Some(v)));
            }
        }
        MatroidTreeDecomposition::new(vertices, edges, tau)
    }
}

/// Rooting the tree, a vertex whose subtree holds `X` and whose children's
/// subtrees hold disjoint proper subsets `X_j` has width
/// `r(X) + Σ (r(E∖X_j) - r(E))`. `feasible[X]` records whether `X` can be
/// the element set of such a subtree; `g[R]` is the least
/// `Σ (r(E∖X_j) - r(E))` over disjoint feasible families inside `R`.
fn matroid_treewidth_search(m: &Matroid) -> Result<(usize, MatroidTables)> {
    let n = m.size();
    cap(n, ELEMENT_CAP)?;
    let full = Subset::full(n);
    let total = m.total_rank();
    let cost = |y: Subset| m.rank(full - y) - total;
    for w in 0..=total {
        let mut feasible = vec![false; 1 << n];
        let mut g = vec![0 as Rank; 1 << n];
        let mut g_pick = vec![Pick::Skip; 1 << n];
        let mut best_pick = vec![Pick::Skip; 1 << n];
        feasible[0] = true;
        for s in 1usize..(1 << n) {
            let set = Subset(s as u64);
            let x = set.first().expect("nonempty");
            let rest = set - Subset::singleton(x);
            // Families of proper feasible subsets of `set`.
            let mut best = g[rest.bits() as usize];
            let mut pick = Pick::Skip;
            for part in rest.subsets() {
                let y = part | Subset::singleton(x);
                if y != set && feasible[y.bits() as usize] {
                    let c = cost(y) + g[(set - y).bits() as usize];
                    if c < best {
                        best = c;
                        pick = Pick::Child(y);
                    }
                }
            }
            best_pick[s] = pick;
            feasible[s] = m.rank(set) + best <= w;
            g[s] = best;
            g_pick[s] = pick;
            if feasible[s] && cost(set) < best {
                g[s] = cost(set);
                g_pick[s] = Pick::Whole;
            }
        }
        if feasible[full.bits() as usize] {
            return Ok((w as usize, MatroidTables { g_pick, best_pick }));
        }
    }
    // The single bag has width r(E).
    let n_sets = 1 << n;
    Ok((total as usize, MatroidTables { g_pick: vec![Pick::Skip; n_sets], best_pick: vec![Pick::Skip; n_sets] }))
}
