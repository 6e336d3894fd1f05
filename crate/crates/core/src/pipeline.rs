//! End-to-end lean decompositions of optimal width.
//!
//! Refinement starts from the single bag over the smallest family that
//! contains it. Leanness alone does not force optimal width, so when that
//! run stops above the tree-width, refinement is repeated from an
//! optimal-width decomposition supplied by the exact oracle.

use serde::Serialize;

use crate::decomposition::{
    matroid_decomp_to_stree, stree_to_matroid_decomp, stree_to_treedecomp, treedecomp_to_stree, GraphTreeDecomposition,
    MatroidTreeDecomposition,
};
use crate::error::{Error, Result};
use crate::family::StarFamilyKind;
use crate::graph::Graph;
use crate::matroid::Matroid;
use crate::rank::Rank;
use crate::refine::{refine_to_lean, RefineConfig, RefineOutcome};
use crate::separation::Universe;
use crate::stree::STree;
use crate::width::{
    brute_force_matroid_treewidth, brute_force_treewidth, optimal_matroid_decomposition, optimal_tree_decomposition,
};

/// Where the refinement that produced the result started.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Start {
    /// The single bag.
    SingleBag,
    /// An optimal-width decomposition from the exact oracle, used after the
    /// single-bag run stopped above the tree-width.
    OptimalSeed,
}

#[derive(Debug, Clone)]
pub struct LeanRun<D> {
    pub decomposition: D,
    pub tree: STree,
    pub family: StarFamilyKind,
    pub width: Rank,
    pub treewidth: Rank,
    pub start: Start,
    /// Width reached by the single-bag run.
    pub single_bag_width: Rank,
    /// Refinement outcomes in the order they ran.
    pub outcomes: Vec<RefineOutcome>,
}

/// A lean tree-decomposition of `g` of width `tw(g)`.
pub fn lean_graph_decomposition(g: &Graph, config: &RefineConfig) -> Result<LeanRun<GraphTreeDecomposition>> {
    let universe = Universe::graph(g)?;
    let treewidth = brute_force_treewidth(g)? as Rank;
    let n = g.num_vertices() as Rank;
    let first = refine_to_lean(&universe, &STree::single_vertex(), &StarFamilyKind::Fk { k: n + 1 }, config)?;
    let d = stree_to_treedecomp(&universe, &first.tree)?;
    let single_bag_width = d.width();
    if single_bag_width == treewidth {
        return Ok(LeanRun {
            decomposition: d,
            tree: first.tree.clone(),
            family: StarFamilyKind::Fk { k: n + 1 },
            width: single_bag_width,
            treewidth,
            start: Start::SingleBag,
            single_bag_width,
            outcomes: vec![first],
        });
    }
    let family = StarFamilyKind::Fk { k: treewidth + 2 };
    let seed = treedecomp_to_stree(g, &optimal_tree_decomposition(g)?)?;
    let second = refine_to_lean(&universe, &seed, &family, config)?;
    let d = stree_to_treedecomp(&universe, &second.tree)?;
    if d.width() != treewidth {
        return Err(Error::Invariant(format!("refinement over F_{} produced width {}", treewidth + 2, d.width())));
    }
    Ok(LeanRun {
        width: d.width(),
        decomposition: d,
        tree: second.tree.clone(),
        family,
        treewidth,
        start: Start::OptimalSeed,
        single_bag_width,
        outcomes: vec![first, second],
    })
}

/// A lean matroid tree-decomposition of `m` of width `tw(m)`.
pub fn lean_matroid_decomposition(m: &Matroid, config: &RefineConfig) -> Result<LeanRun<MatroidTreeDecomposition>> {
    let universe = m.universe();
    let treewidth = brute_force_matroid_treewidth(m)? as Rank;
    let k = m.total_rank() + 1;
    let first = refine_to_lean(&universe, &STree::single_vertex(), &StarFamilyKind::MatroidFk { k }, config)?;
    let d = stree_to_matroid_decomp(m, &first.tree)?;
    let single_bag_width = d.width(m)?;
    if single_bag_width == treewidth {
        return Ok(LeanRun {
            decomposition: d,
            tree: first.tree.clone(),
            family: StarFamilyKind::MatroidFk { k },
            width: single_bag_width,
            treewidth,
            start: Start::SingleBag,
            single_bag_width,
            outcomes: vec![first],
        });
    }
    let family = StarFamilyKind::MatroidFk { k: treewidth + 1 };
    let seed = matroid_decomp_to_stree(m, &optimal_matroid_decomposition(m)?)?;
    let second = refine_to_lean(&universe, &seed, &family, config)?;
    let d = stree_to_matroid_decomp(m, &second.tree)?;
    let width = d.width(m)?;
    if width != treewidth {
        return Err(Error::Invariant(format!("refinement over matroid F_{} produced width {width}", treewidth + 1)));
    }
    Ok(LeanRun {
        decomposition: d,
        tree: second.tree.clone(),
        family,
        width,
        treewidth,
        start: Start::OptimalSeed,
        single_bag_width,
        outcomes: vec![first, second],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{verify_lean_td, verify_matroid_lean, DEFAULT_PAIR_BUDGET};

    #[test]
    fn optimal_seed_repairs_a_suboptimal_lean_result() {
        // Lean from the single bag, but of width 5 instead of 4.
        let g = Graph::new(
            7,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 2),
                (1, 3),
                (1, 4),
                (1, 5),
                (2, 3),
                (2, 4),
                (2, 5),
                (3, 6),
                (4, 6),
                (5, 6),
            ],
        )
        .unwrap();
        let run = lean_graph_decomposition(&g, &RefineConfig::default()).unwrap();
        assert_eq!(run.single_bag_width, 5);
        assert_eq!(run.start, Start::OptimalSeed);
        assert_eq!(run.width, 4);
        assert!(verify_lean_td(&g, &run.decomposition, DEFAULT_PAIR_BUDGET).unwrap().pass);
    }

    #[test]
    fn single_bag_suffices_for_small_graphs() {
        let run = lean_graph_decomposition(&Graph::cycle(4), &RefineConfig::default()).unwrap();
        assert_eq!(run.start, Start::SingleBag);
        assert_eq!(run.width, 2);
    }

    #[test]
    fn matroid_cycle_of_length_five() {
        let m = Matroid::graphic(&Graph::cycle(5)).unwrap();
        let run = lean_matroid_decomposition(&m, &RefineConfig::default()).unwrap();
        assert_eq!(run.width, 2);
        assert!(verify_matroid_lean(&m, &run.decomposition).unwrap().pass);
    }
}
