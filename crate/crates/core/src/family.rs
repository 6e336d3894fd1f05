//! Families of stars, membership, addable separations, and S-tree validation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rank::Rank;
use crate::separation::{Separation, Universe};
use crate::stree::{shift, STree};

/// A family of stars over a universe, with the order bound `k` of the
/// S_k-trees it is used with (all labels must have order `< k`).
pub trait StarFamily {
    fn contains(&self, universe: &Universe, star: &[Separation]) -> bool;
    fn order_bound(&self) -> Rank;
    fn name(&self) -> String;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StarFamilyKind {
    /// Stars of graph separations of order `< k` and size `< k`.
    Fk { k: Rank },
    /// `Fk` stars with at most two members.
    Pk { k: Rank },
    /// Three-member stars whose small sides cover the graph, and
    /// one-member `Fk` stars.
    Tk { k: Rank },
    /// Stars of order `< theta` and size `< p`.
    FThetaP { theta: Rank, p: Rank },
    /// Stars of bipartitions of order `< k` and size `< k`.
    MatroidFk { k: Rank },
}

impl StarFamilyKind {
    pub fn new_ftheta(theta: Rank, p: Rank) -> Result<StarFamilyKind> {
        if theta > p || theta < 1 {
            return Err(Error::Precondition(format!("need 1 <= theta <= p, got theta={theta}, p={p}")));
        }
        Ok(StarFamilyKind::FThetaP { theta, p })
    }

    /// Size bound: stars must have `⟨σ⟩ <` this value.
    pub fn size_bound(&self) -> Rank {
        match *self {
            StarFamilyKind::Fk { k }
            | StarFamilyKind::Pk { k }
            | StarFamilyKind::Tk { k }
            | StarFamilyKind::MatroidFk { k } => k,
            StarFamilyKind::FThetaP { p, .. } => p,
        }
    }

    pub fn for_matroids(&self) -> bool {
        matches!(self, StarFamilyKind::MatroidFk { .. })
    }

    fn check_universe(&self, universe: &Universe) -> Result<()> {
        if self.for_matroids() != universe.is_bipartitions() {
            return Err(Error::Precondition(format!("family {} does not match the universe", self.name())));
        }
        Ok(())
    }

    /// Membership, failing on a universe of the wrong kind.
    pub fn family_contains(&self, universe: &Universe, star: &[Separation]) -> Result<bool> {
        self.check_universe(universe)?;
        Ok(self.contains(universe, star))
    }

    /// Canonical addable separations at `t`: `(Z, V)` or `(Z, E∖Z)` for `Z`
    /// inside the interior of the star at `t`, restricted by the family.
    /// Results are in increasing order of `Z`'s bits.
    pub fn addable_candidates(
        &self,
        universe: &Universe,
        tree: &STree,
        t: usize,
        budget: usize,
    ) -> Result<Vec<Separation>> {
        self.check_universe(universe)?;
        let star = tree.star(t);
        let interior = tree.interior(t, universe.full());
        let bound = self.order_bound();
        let allowed = match self {
            StarFamilyKind::Tk { .. } => false,
            StarFamilyKind::Pk { .. } => star.len() <= 1,
            _ => true,
        };
        if !allowed {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for z in interior.subsets() {
            let s = universe.small_side(z);
            if universe.order(s) >= bound {
                continue;
            }
            if out.len() == budget {
                return Err(Error::BudgetExceeded(budget));
            }
            out.push(s);
        }
        Ok(out)
    }

    /// Every separation of the universe addable at `t`, by enumeration.
    /// Only for ground sets of at most `cap` elements.
    pub fn addable_exhaustive(
        &self,
        universe: &Universe,
        tree: &STree,
        t: usize,
        cap: usize,
    ) -> Result<Vec<Separation>> {
        self.check_universe(universe)?;
        let star = tree.star(t);
        let mut out = Vec::new();
        for s in universe.enumerate_all(cap)? {
            let mut bigger = star.clone();
            bigger.push(s);
            if self.contains(universe, &bigger) {
                out.push(s);
            }
        }
        out.sort();
        Ok(out)
    }
}

impl StarFamily for StarFamilyKind {
    fn contains(&self, universe: &Universe, star: &[Separation]) -> bool {
        if self.for_matroids() != universe.is_bipartitions() || !universe.is_star(star) {
            return false;
        }
        let bound = self.order_bound();
        if star.iter().any(|&s| !universe.contains(s) || universe.order(s) >= bound) {
            return false;
        }
        let small = || universe.star_size_unchecked(star) < self.size_bound();
        match self {
            StarFamilyKind::Fk { .. } | StarFamilyKind::FThetaP { .. } | StarFamilyKind::MatroidFk { .. } => small(),
            StarFamilyKind::Pk { .. } => star.len() <= 2 && small(),
            StarFamilyKind::Tk { .. } => match star.len() {
                1 => small(),
                3 => {
                    let g = universe.graph_ref().expect("graph universe");
                    let covered = star.iter().fold(crate::subset::Subset::EMPTY, |acc, s| acc | s.left);
                    covered == g.vertex_set()
                        && g.edges().iter().all(|&(u, v)| star.iter().any(|s| s.left.contains(u) && s.left.contains(v)))
                }
                _ => false,
            },
        }
    }

    fn order_bound(&self) -> Rank {
        match *self {
            StarFamilyKind::Fk { k }
            | StarFamilyKind::Pk { k }
            | StarFamilyKind::Tk { k }
            | StarFamilyKind::MatroidFk { k } => k,
            StarFamilyKind::FThetaP { theta, .. } => theta,
        }
    }

    fn name(&self) -> String {
        match *self {
            StarFamilyKind::Fk { k } => format!("F_{k}"),
            StarFamilyKind::Pk { k } => format!("P_{k}"),
            StarFamilyKind::Tk { k } => format!("T_{k}"),
            StarFamilyKind::FThetaP { theta, p } => format!("F^{theta}_{p}"),
            StarFamilyKind::MatroidFk { k } => format!("matroid F_{k}"),
        }
    }
}

/// Result of checking an S-tree's labelling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct STreeReport {
    /// Edges whose reverse label is not the inverse of the forward label.
    pub involution_violations: Vec<usize>,
    /// Darts whose label is not a separation of the universe.
    pub foreign_labels: Vec<usize>,
    /// Vertices whose star is not a star.
    pub non_star_vertices: Vec<usize>,
    /// Pairs of adjacent darts `e <= f` with `α(e) ≰ α(f)`.
    pub order_violations: Vec<(usize, usize)>,
    /// Vertices whose star is not in the requested family.
    pub family_failures: Vec<usize>,
    pub max_order: Option<Rank>,
    pub max_star_size: Rank,
    pub tame: bool,
    pub valid: bool,
}

/// Checks involution consistency, membership of labels, tameness, order
/// preservation, and (optionally) family membership of every star.
pub fn validate_stree(universe: &Universe, tree: &STree, family: Option<&dyn StarFamily>) -> STreeReport {
    let involution_violations: Vec<usize> =
        (0..tree.num_edges()).filter(|&e| tree.label(2 * e + 1) != tree.label(2 * e).invert()).collect();
    let foreign_labels: Vec<usize> = tree.darts().filter(|&d| !universe.contains(tree.label(d))).collect();
    let non_star_vertices: Vec<usize> =
        (0..tree.num_vertices()).filter(|&t| !universe.is_star(&tree.star(t))).collect();
    let mut order_violations = Vec::new();
    for t in 0..tree.num_vertices() {
        for e in tree.in_darts(t) {
            for f in tree.in_darts(t) {
                if e != f && !tree.label(e).leq(tree.label(f ^ 1)) {
                    order_violations.push((e, f ^ 1));
                }
            }
        }
    }
    let family_failures: Vec<usize> = match family {
        Some(f) => (0..tree.num_vertices()).filter(|&t| !f.contains(universe, &tree.star(t))).collect(),
        None => Vec::new(),
    };
    let max_order = tree.darts().map(|d| universe.order(tree.label(d))).max();
    let max_star_size = tree.max_star_size(universe);
    let tame = non_star_vertices.is_empty();
    let valid = involution_violations.is_empty()
        && foreign_labels.is_empty()
        && tame
        && order_violations.is_empty()
        && family_failures.is_empty()
        && match (family, max_order) {
            (Some(f), Some(m)) => m < f.order_bound(),
            _ => true,
        };
    STreeReport {
        involution_violations,
        foreign_labels,
        non_star_vertices,
        order_violations,
        family_failures,
        max_order,
        max_star_size,
        tame,
        valid,
    }
}

/// A shifted star that left the family, or grew.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftCounterexample {
    pub tree: usize,
    pub dart: usize,
    pub target: (Vec<usize>, Vec<usize>),
    pub vertex: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftingReport {
    pub shifts_checked: usize,
    pub stars_checked: usize,
    pub counterexample: Option<ShiftCounterexample>,
}

/// For every tree, every dart `e`, and every separation `(X,Y) >= α(e)`
/// linked to `α(e)`, shifts and checks that every star other than the one at
/// the tail of `e` stays in the family and does not grow. Stops at the first
/// counterexample.
pub fn is_fixed_under_shifting_sample(
    family: &dyn StarFamily,
    universe: &Universe,
    trees: &[STree],
    cap: usize,
) -> Result<ShiftingReport> {
    let mut report = ShiftingReport { shifts_checked: 0, stars_checked: 0, counterexample: None };
    let all = universe.enumerate_all(cap)?;
    for (ti, tree) in trees.iter().enumerate() {
        for d in tree.darts() {
            let base = tree.label(d);
            for &target in all.iter().filter(|s| base.leq(**s)) {
                if universe.lambda(base, target)? != universe.order(target) {
                    continue;
                }
                let (shifted, map) = shift(tree, d, target)?;
                report.shifts_checked += 1;
                for v in 0..shifted.num_vertices() {
                    let old = map.vertices[v];
                    if old == tree.tail(d) {
                        continue;
                    }
                    report.stars_checked += 1;
                    let star = shifted.star(v);
                    let reason = if !family.contains(universe, &star) {
                        Some("shifted star is not in the family")
                    } else if universe.star_size_unchecked(&star) > universe.star_size_unchecked(&tree.star(old)) {
                        Some("shifted star is larger than the original")
                    } else {
                        None
                    };
                    if let Some(reason) = reason {
                        report.counterexample = Some(ShiftCounterexample {
                            tree: ti,
                            dart: d,
                            target: (target.left.to_vec(), target.right.to_vec()),
                            vertex: old,
                            reason: reason.into(),
                        });
                        return Ok(report);
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::rank::RankOracle;
    use crate::subset::Subset;

    fn set(v: &[usize]) -> Subset {
        Subset::from_elements(v.iter().copied())
    }

    fn sep(a: &[usize], b: &[usize]) -> Separation {
        Separation::new(set(a), set(b))
    }

    fn p3() -> Universe {
        Universe::graph(&Graph::path(3)).unwrap()
    }

    #[test]
    fn fk_membership() {
        let u = p3();
        let sigma = [sep(&[0], &[0, 1, 2]), sep(&[2], &[0, 1, 2])];
        assert!(StarFamilyKind::Fk { k: 4 }.contains(&u, &sigma));
        assert!(!StarFamilyKind::Fk { k: 3 }.contains(&u, &sigma));
        assert!(StarFamilyKind::Pk { k: 4 }.contains(&u, &sigma));
        let m = Universe::bipartitions(RankOracle::cardinality(3).unwrap());
        assert!(StarFamilyKind::Fk { k: 4 }.family_contains(&m, &[]).is_err());
    }

    #[test]
    fn tk_covering_condition() {
        let k3 = Graph::complete(3);
        let u = Universe::graph(&k3).unwrap();
        // Three branches, each holding one edge of the triangle.
        let sigma = [sep(&[0, 1], &[0, 1, 2]), sep(&[1, 2], &[0, 1, 2]), sep(&[0, 2], &[0, 1, 2])];
        assert!(StarFamilyKind::Tk { k: 4 }.contains(&u, &sigma));
        assert!(!StarFamilyKind::Tk { k: 2 }.contains(&u, &sigma));
        let missing = [sep(&[0, 1], &[0, 1, 2]), sep(&[1, 2], &[0, 1, 2]), sep(&[1], &[0, 1, 2])];
        assert!(!StarFamilyKind::Tk { k: 4 }.contains(&u, &missing));
        assert!(!StarFamilyKind::Tk { k: 4 }.contains(&u, &sigma[..2]));
    }

    #[test]
    fn candidates_at_a_bag() {
        let u = p3();
        let t = STree::from_edge_labels(2, vec![(0, 1)], vec![sep(&[0, 1], &[1, 2])]).unwrap();
        // Vertex 0 receives (1,2 | 0,1): interior {0,1}.
        let c = StarFamilyKind::Fk { k: 3 }.addable_candidates(&u, &t, 0, 100).unwrap();
        assert_eq!(
            c,
            vec![sep(&[], &[0, 1, 2]), sep(&[0], &[0, 1, 2]), sep(&[1], &[0, 1, 2]), sep(&[0, 1], &[0, 1, 2])]
        );
        for s in &c {
            let mut star = t.star(0);
            star.push(*s);
            assert!(StarFamilyKind::Fk { k: 3 }.contains(&u, &star));
        }
        assert!(StarFamilyKind::Tk { k: 3 }.addable_candidates(&u, &t, 0, 100).unwrap().is_empty());
        assert_eq!(StarFamilyKind::Fk { k: 3 }.addable_candidates(&u, &t, 0, 2), Err(Error::BudgetExceeded(2)));
    }

    #[test]
    fn matroid_candidates() {
        let k3 = Graph::complete(3);
        let m = Universe::bipartitions(RankOracle::graphic(&k3).unwrap());
        let t = STree::from_edge_labels(2, vec![(0, 1)], vec![sep(&[1, 2], &[0])]).unwrap();
        let c = StarFamilyKind::MatroidFk { k: 2 }.addable_candidates(&m, &t, 1, 100).unwrap();
        assert_eq!(c, vec![sep(&[], &[0, 1, 2]), sep(&[0], &[1, 2])]);
    }

    #[test]
    fn validation() {
        let u = p3();
        let s = sep(&[0, 1], &[1, 2]);
        let good = STree::from_edge_labels(2, vec![(0, 1)], vec![s]).unwrap();
        let r = validate_stree(&u, &good, Some(&StarFamilyKind::Fk { k: 3 }));
        assert!(r.valid && r.tame);
        assert_eq!(r.max_order, Some(1));
        let bad = STree::from_dart_labels(2, vec![(0, 1)], vec![s, s]).unwrap();
        let r = validate_stree(&u, &bad, None);
        assert_eq!(r.involution_violations, vec![0]);
        assert!(!r.valid);
    }

    struct SizeThree;

    impl StarFamily for SizeThree {
        fn contains(&self, universe: &Universe, star: &[Separation]) -> bool {
            universe.is_star(star) && universe.star_size_unchecked(star) == 3
        }
        fn order_bound(&self) -> Rank {
            4
        }
        fn name(&self) -> String {
            "size exactly 3".into()
        }
    }

    #[test]
    fn shifting_sample() {
        let c4 = Universe::graph(&Graph::cycle(4)).unwrap();
        let tree = STree::from_edge_labels(2, vec![(0, 1)], vec![sep(&[0, 1, 2], &[0, 2, 3])]).unwrap();
        let ok =
            is_fixed_under_shifting_sample(&StarFamilyKind::Fk { k: 4 }, &c4, std::slice::from_ref(&tree), 8).unwrap();
        assert!(ok.counterexample.is_none());
        assert!(ok.shifts_checked > 0);
        let bad = is_fixed_under_shifting_sample(&SizeThree, &c4, &[tree], 8).unwrap();
        assert!(bad.counterexample.is_some());
    }
}
