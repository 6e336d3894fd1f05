use proptest::prelude::*;

use septree::corpus::{connected_graphs, path_stree, vertex_order_bags};
use septree::decomposition::{stree_to_treedecomp, treedecomp_to_stree};
use septree::family::{validate_stree, StarFamilyKind};
use septree::flow::menger_within;
use septree::refine::{refine_combined, refine_to_lean, refine_to_linked, Mode, RefineConfig, RefineOutcome};
use septree::stree::{shift, STree};
use septree::verify::{verify_lean_td, verify_linked_td, DEFAULT_PAIR_BUDGET};
use septree::width::elimination_decomposition;
use septree::{Graph, Rank, Universe};

fn connected_graph() -> impl Strategy<Value = Graph> {
    (3usize..=6).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_filter_map("connected", move |mask| {
            let all: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let edges: Vec<(usize, usize)> =
                all.into_iter().zip(mask).filter(|(_, keep)| *keep).map(|(e, _)| e).collect();
            let g = Graph::new(n, &edges).unwrap();
            g.is_connected().then_some(g)
        })
    })
}

/// A connected graph with the S-tree of a random elimination order.
fn graph_and_tree() -> impl Strategy<Value = (Graph, STree)> {
    connected_graph().prop_flat_map(|g| {
        let n = g.num_vertices();
        Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(move |order| {
            let d = elimination_decomposition(&g, &order).unwrap();
            let t = treedecomp_to_stree(&g, &d).unwrap();
            (g.clone(), t)
        })
    })
}

fn least_k(u: &Universe, t: &STree) -> Rank {
    t.max_order(u).max(t.max_star_size(u)) + 1
}

/// Labels above the initial maximum never appear in any later potential.
fn assert_width_safe(outcome: &RefineOutcome, max_order: Rank, max_size: Rank) {
    for record in &outcome.trace {
        let p = &record.potential_after;
        for (i, level) in p.levels.iter().enumerate() {
            let threshold = p.top - i as Rank;
            let (edge, vertex) = match p.mode {
                Mode::Linked => (Some(level[0]), None),
                Mode::Lean => (None, Some(level[0])),
                Mode::Combined => (Some(level[0]), Some(level[2])),
            };
            if threshold > max_order {
                assert_eq!(edge.unwrap_or(0), 0, "an edge reached order {threshold}");
            }
            if threshold > max_size {
                assert_eq!(vertex.unwrap_or(0), 0, "a star reached size {threshold}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shifts_are_tame_and_linked_shifts_keep_orders((g, t) in graph_and_tree()) {
        let u = Universe::graph(&g).unwrap();
        let all = u.enumerate_all(16).unwrap();
        for d in t.darts() {
            let base = t.label(d);
            for &target in all.iter().filter(|s| base.leq(**s)) {
                let (shifted, map) = shift(&t, d, target).unwrap();
                prop_assert!(shifted.is_tame(&u));
                let tail = map.vertices.iter().position(|&v| v == t.tail(d)).unwrap();
                prop_assert_eq!(shifted.star(tail), vec![target.invert()]);
                if u.lambda_interval(base, target).unwrap().0 == u.order(target) {
                    for e in 0..shifted.num_edges() {
                        prop_assert!(u.order(shifted.label(2 * e)) <= u.order(t.label(2 * map.edges[e])));
                    }
                }
            }
        }
    }

    #[test]
    fn linked_refinement_gives_linked_decompositions((g, t) in graph_and_tree()) {
        let u = Universe::graph(&g).unwrap();
        let k = least_k(&u, &t);
        let family = StarFamilyKind::Fk { k };
        let config = RefineConfig { trace: true, ..RefineConfig::default() };
        let out = refine_to_linked(&u, &t, &family, &config).unwrap();
        assert_width_safe(&out, t.max_order(&u), t.max_star_size(&u));
        prop_assert!(validate_stree(&u, &out.tree, Some(&family)).valid);
        let d = stree_to_treedecomp(&u, &out.tree).unwrap();
        prop_assert!(verify_linked_td(&g, &d).unwrap().pass);
        let again = refine_to_linked(&u, &out.tree, &family, &config).unwrap();
        prop_assert_eq!(again.iterations, 0);
        prop_assert_eq!(again.tree, out.tree);
    }

    #[test]
    fn lean_refinement_gives_lean_decompositions((g, t) in graph_and_tree()) {
        let u = Universe::graph(&g).unwrap();
        let k = least_k(&u, &t);
        let family = StarFamilyKind::Fk { k };
        let config = RefineConfig { trace: true, ..RefineConfig::default() };
        let out = refine_to_lean(&u, &t, &family, &config).unwrap();
        assert_width_safe(&out, t.max_order(&u), t.max_star_size(&u));
        prop_assert!(out.iterations <= 10 * k as usize * out.tree.num_edges().pow(2) + 1000);
        let d = stree_to_treedecomp(&u, &out.tree).unwrap();
        prop_assert!(d.width() < k - 1);
        prop_assert!(verify_lean_td(&g, &d, DEFAULT_PAIR_BUDGET).unwrap().pass);
        let again = refine_to_lean(&u, &out.tree, &family, &config).unwrap();
        prop_assert_eq!(again.iterations, 0);
    }

    #[test]
    fn combined_refinement_is_monotone((g, t) in graph_and_tree()) {
        let u = Universe::graph(&g).unwrap();
        let family = StarFamilyKind::Fk { k: least_k(&u, &t) };
        let config = RefineConfig { trace: true, ..RefineConfig::default() };
        let out = refine_combined(&u, &t, &family, &config).unwrap();
        prop_assert!(out.potential_failures.is_empty());
        assert_width_safe(&out, t.max_order(&u), t.max_star_size(&u));
        for r in &out.trace {
            prop_assert!(r.potential_after.precedes(&r.potential_before));
        }
    }
}

/// For lean path-decompositions, equal-size subsets of an end bag are
/// joined by as many disjoint paths as their size.
#[test]
fn end_bags_of_lean_path_decompositions_are_linked() {
    for g in connected_graphs(3, 6).unwrap() {
        let n = g.num_vertices();
        let u = Universe::graph(&g).unwrap();
        for order in [(0..n).collect::<Vec<_>>(), (0..n).rev().collect()] {
            let t = path_stree(&g, &vertex_order_bags(&g, &order)).unwrap();
            let family = StarFamilyKind::Pk { k: least_k(&u, &t) };
            let out = refine_to_lean(&u, &t, &family, &RefineConfig::default()).unwrap();
            let d = stree_to_treedecomp(&u, &out.tree).unwrap();
            let ends: Vec<usize> = (0..d.bags.len()).filter(|&i| out.tree.degree(i) <= 1).collect();
            for &end in &ends {
                let bag = d.bags[end];
                for size in 1..=bag.len() {
                    for z1 in bag.subsets_of_size(size) {
                        for z2 in bag.subsets_of_size(size) {
                            let (paths, _) = menger_within(&g, z1, z2, g.vertex_set());
                            assert_eq!(paths, size, "{:?}: {z1} and {z2} in end bag {bag}", g.edges());
                        }
                    }
                }
            }
        }
    }
}
