use proptest::prelude::*;

use septree::corpus::graphs_up_to_iso;
use septree::flow::{lambda_flow, menger_within};
use septree::{Graph, Separation, Subset, Universe};

fn graph_strategy() -> impl Strategy<Value = Graph> {
    (2usize..=6).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |mask| {
            let all: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let edges: Vec<(usize, usize)> =
                all.into_iter().zip(mask).filter(|(_, keep)| *keep).map(|(e, _)| e).collect();
            Graph::new(n, &edges).unwrap()
        })
    })
}

/// A separation of `g` built from a side assignment: vertices of a side
/// with a neighbour on the other side move into the separator.
fn separation_from(g: &Graph, sides: &[u8]) -> Separation {
    let mut left = Subset::EMPTY;
    let mut right = Subset::EMPTY;
    for (v, side) in sides.iter().enumerate().take(g.num_vertices()) {
        match side % 3 {
            0 => left.insert(v),
            1 => right.insert(v),
            _ => {
                left.insert(v);
                right.insert(v);
            }
        }
    }
    for v in 0..g.num_vertices() {
        if left.contains(v) && !right.contains(v) && !(g.neighbors(v) & (right - left)).is_empty() {
            right.insert(v);
        }
    }
    Separation::new(left, right)
}

fn instance() -> impl Strategy<Value = (Graph, Vec<Separation>)> {
    graph_strategy().prop_flat_map(|g| {
        let n = g.num_vertices();
        proptest::collection::vec(proptest::collection::vec(any::<u8>(), n), 3)
            .prop_map(move |sides| (g.clone(), sides.iter().map(|s| separation_from(&g, s)).collect()))
    })
}

proptest! {
    #[test]
    fn involution_reverses_order((g, s) in instance()) {
        let u = Universe::graph(&g).unwrap();
        for &a in &s {
            prop_assert!(u.contains(a));
            prop_assert_eq!(a.invert().invert(), a);
            for &b in &s {
                prop_assert_eq!(a.leq(b), b.invert().leq(a.invert()));
            }
        }
    }

    #[test]
    fn join_and_meet_are_bounds((g, s) in instance()) {
        let u = Universe::graph(&g).unwrap();
        let (a, b, c) = (s[0], s[1], s[2]);
        let (j, m) = (a.join(b), a.meet(b));
        prop_assert!(u.contains(j) && u.contains(m));
        prop_assert!(a.leq(j) && b.leq(j) && m.leq(a) && m.leq(b));
        if a.leq(c) && b.leq(c) {
            prop_assert!(j.leq(c));
        }
        if c.leq(a) && c.leq(b) {
            prop_assert!(c.leq(m));
        }
    }

    #[test]
    fn order_is_symmetric_and_submodular((g, s) in instance()) {
        let u = Universe::graph(&g).unwrap();
        let (a, b) = (s[0], s[1]);
        prop_assert_eq!(u.order(a), u.order(a.invert()));
        prop_assert!(u.order(a.join(b)) + u.order(a.meet(b)) <= u.order(a) + u.order(b));
    }

    #[test]
    fn interval_minimum_is_attained((g, s) in instance()) {
        let u = Universe::graph(&g).unwrap();
        let (lo, hi) = (s[0].meet(s[1]), s[0].join(s[1]));
        let (value, witness) = u.lambda_interval(lo, hi).unwrap();
        prop_assert!(lo.leq(witness) && witness.leq(hi));
        prop_assert_eq!(u.order(witness), value);
        for x in u.interval(lo, hi).unwrap() {
            prop_assert!(value <= u.order(x));
        }
        prop_assert_eq!(lambda_flow(&g, lo, hi).unwrap() as i64, value);
    }

    #[test]
    fn menger_cut_certifies_the_count(g in graph_strategy(), a in any::<u64>(), b in any::<u64>()) {
        let full = g.vertex_set();
        let (s, t) = (Subset(a) & full, Subset(b) & full);
        let (count, cut) = menger_within(&g, s, t, full);
        prop_assert_eq!(cut.len(), count);
        let rest = full - cut;
        prop_assert!((g.reach(s & rest, rest) & t).is_empty());
        prop_assert!(count <= s.len().min(t.len()));
    }
}

#[test]
fn lattice_laws_exhaustive_on_five_vertices() {
    for n in 1..=5 {
        for g in graphs_up_to_iso(n).unwrap() {
            let u = Universe::graph(&g).unwrap();
            let all = u.enumerate_all(16).unwrap();
            for &a in &all {
                for &b in &all {
                    let (j, m) = (a.join(b), a.meet(b));
                    assert!(a.leq(j) && b.leq(j) && m.leq(a) && m.leq(b));
                    assert!(u.order(j) + u.order(m) <= u.order(a) + u.order(b));
                    assert_eq!(a.leq(b), b.invert().leq(a.invert()));
                }
            }
        }
    }
}
