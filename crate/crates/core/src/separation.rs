//! Oriented set separations, their lattice operations, order functions,
//! stars, and interval connectivity.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow;
use crate::graph::Graph;
use crate::rank::{Rank, RankKind, RankOracle};
use crate::subset::Subset;

/// An oriented separation `(left, right)`.
///
/// The derived ordering compares `left` bits first, then `right`; it is the
/// canonical encoding used to break every tie deterministically.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Separation {
    pub left: Subset,
    pub right: Subset,
}

impl Separation {
    pub fn new(left: Subset, right: Subset) -> Separation {
        Separation { left, right }
    }

    pub fn invert(self) -> Separation {
        Separation { left: self.right, right: self.left }
    }

    /// `(A,B) <= (C,D)` iff `A ⊆ C` and `B ⊇ D`.
    pub fn leq(self, other: Separation) -> bool {
        self.left.is_subset(other.left) && other.right.is_subset(self.right)
    }

    pub fn join(self, other: Separation) -> Separation {
        Separation { left: self.left | other.left, right: self.right & other.right }
    }

    pub fn meet(self, other: Separation) -> Separation {
        Separation { left: self.left & other.left, right: self.right | other.right }
    }

    pub fn is_nested(self, other: Separation) -> bool {
        self.leq(other) || self.leq(other.invert()) || self.invert().leq(other) || self.invert().leq(other.invert())
    }

    /// The separator `left ∩ right`.
    pub fn separator(self) -> Subset {
        self.left & self.right
    }
}

impl fmt::Debug for Separation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)
    }
}

impl fmt::Display for Separation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// JSON form of a separation: sorted element arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationSpec {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl From<Separation> for SeparationSpec {
    fn from(s: Separation) -> Self {
        SeparationSpec { left: s.left.to_vec(), right: s.right.to_vec() }
    }
}

impl SeparationSpec {
    pub fn to_separation(&self, size: usize) -> Result<Separation> {
        let to_subset = |v: &[usize]| -> Result<Subset> {
            match v.iter().find(|&&x| x >= size) {
                Some(x) => Err(Error::Parse(format!("element {x} outside ground set of size {size}"))),
                None => Ok(Subset::from_elements(v.iter().copied())),
            }
        };
        Ok(Separation::new(to_subset(&self.left)?, to_subset(&self.right)?))
    }
}

/// Which pairs `(A,B)` with `A ∪ B = V` belong to the universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniverseKind {
    /// Separations of a graph: no edge between `A∖B` and `B∖A`.
    GraphSeparations(Graph),
    /// Bipartitions `(A, V∖A)` of a matroid ground set.
    Bipartitions,
}

/// A universe of set separations together with the rank function whose
/// order function `r(A) + r(B) - r(V)` measures them.
#[derive(Debug, Clone)]
pub struct Universe {
    kind: UniverseKind,
    rank: RankOracle,
}

impl Universe {
    /// Separations of `g` with the cardinality order `|A ∩ B|`.
    pub fn graph(g: &Graph) -> Result<Universe> {
        Ok(Universe {
            kind: UniverseKind::GraphSeparations(g.clone()),
            rank: RankOracle::cardinality(g.num_vertices())?,
        })
    }

    /// Separations of `g` measured by an arbitrary rank function on its vertices.
    pub fn graph_with_rank(g: &Graph, rank: RankOracle) -> Result<Universe> {
        if rank.size() != g.num_vertices() {
            return Err(Error::GroundMismatch(rank.size(), g.num_vertices()));
        }
        Ok(Universe { kind: UniverseKind::GraphSeparations(g.clone()), rank })
    }

    /// Bipartitions of the rank function's ground set.
    pub fn bipartitions(rank: RankOracle) -> Universe {
        Universe { kind: UniverseKind::Bipartitions, rank }
    }

    pub fn kind(&self) -> &UniverseKind {
        &self.kind
    }

    pub fn graph_ref(&self) -> Option<&Graph> {
        match &self.kind {
            UniverseKind::GraphSeparations(g) => Some(g),
            UniverseKind::Bipartitions => None,
        }
    }

    pub fn is_bipartitions(&self) -> bool {
        matches!(self.kind, UniverseKind::Bipartitions)
    }

    pub fn rank(&self) -> &RankOracle {
        &self.rank
    }

    pub fn size(&self) -> usize {
        self.rank.size()
    }

    pub fn full(&self) -> Subset {
        self.rank.full()
    }

    /// `(∅, V)`, the least separation.
    pub fn bottom(&self) -> Separation {
        Separation::new(Subset::EMPTY, self.full())
    }

    /// `(V, ∅)`, the greatest separation.
    pub fn top(&self) -> Separation {
        Separation::new(self.full(), Subset::EMPTY)
    }

    /// The separation `(A, B)` a set `A` induces: `(A, V)` for graphs and
    /// `(A, V∖A)` for bipartitions.
    pub fn small_side(&self, a: Subset) -> Separation {
        match self.kind {
            UniverseKind::GraphSeparations(_) => Separation::new(a, self.full()),
            UniverseKind::Bipartitions => Separation::new(a, self.full() - a),
        }
    }

    pub fn contains(&self, s: Separation) -> bool {
        let full = self.full();
        if (s.left | s.right) != full || !s.left.is_subset(full) || !s.right.is_subset(full) {
            return false;
        }
        match &self.kind {
            UniverseKind::GraphSeparations(g) => !g.joins(s.left - s.right, s.right - s.left),
            UniverseKind::Bipartitions => s.separator().is_empty(),
        }
    }

    pub fn check(&self, s: Separation) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::NotInUniverse(s.to_string()))
        }
    }

    /// `|A,B|_r = r(A) + r(B) - r(V)`.
    pub fn order(&self, s: Separation) -> Rank {
        self.rank.order(s.left, s.right)
    }

    /// Whether every pair of members `(A,B), (C,D)` satisfies `(A,B) <= (D,C)`.
    /// A member listed twice is compared with its own inverse.
    pub fn is_star(&self, members: &[Separation]) -> bool {
        members.iter().enumerate().all(|(i, a)| members[i + 1..].iter().all(|b| a.leq(b.invert())))
    }

    /// `⟨σ⟩_r = Σ r(B_i) - n·r(V)` for a star of `n+1` members; `r(V)` for the
    /// empty star.
    pub fn star_size(&self, members: &[Separation]) -> Result<Rank> {
        if !self.is_star(members) {
            return Err(Error::NotAStar);
        }
        Ok(self.star_size_unchecked(members))
    }

    pub fn star_size_unchecked(&self, members: &[Separation]) -> Rank {
        let rv = self.rank.rank(self.full());
        if members.is_empty() {
            return rv;
        }
        members.iter().map(|s| self.rank.rank(s.right)).sum::<Rank>() - (members.len() as Rank - 1) * rv
    }

    /// Every separation `s` of the universe with `lo <= s <= hi`.
    pub fn interval(&self, lo: Separation, hi: Separation) -> Result<Interval<'_>> {
        if !lo.leq(hi) {
            return Err(Error::EmptyInterval);
        }
        Ok(Interval::new(self, lo, hi))
    }

    /// Every separation of the universe, capped at `cap` ground elements.
    pub fn enumerate_all(&self, cap: usize) -> Result<Vec<Separation>> {
        if self.size() > cap {
            return Err(Error::OverCap { size: self.size(), cap });
        }
        Ok(self.interval(self.bottom(), self.top())?.collect())
    }

    /// Minimum order over the interval `[lo, hi]` with the canonically least
    /// minimiser, by exhaustive enumeration.
    pub fn lambda_interval(&self, lo: Separation, hi: Separation) -> Result<(Rank, Separation)> {
        self.interval(lo, hi)?.map(|s| (self.order(s), s)).min().ok_or(Error::EmptyInterval)
    }

    /// Every minimiser of the order over `[lo, hi]`, in canonical order.
    pub fn interval_minimizers(&self, lo: Separation, hi: Separation) -> Result<(Rank, Vec<Separation>)> {
        let mut best = Rank::MAX;
        let mut out = Vec::new();
        for s in self.interval(lo, hi)? {
            let o = self.order(s);
            if o < best {
                best = o;
                out.clear();
            }
            if o == best {
                out.push(s);
            }
        }
        out.sort();
        Ok((best, out))
    }

    /// The value of `λ(lo, hi)`. For graphs with the cardinality order this
    /// is a vertex-disjoint path count; otherwise the interval is enumerated.
    pub fn lambda(&self, lo: Separation, hi: Separation) -> Result<Rank> {
        match (&self.kind, self.rank.kind()) {
            (UniverseKind::GraphSeparations(g), RankKind::Cardinality) => {
                if !lo.leq(hi) {
                    return Err(Error::EmptyInterval);
                }
                Ok(flow::lambda_flow(g, lo, hi)? as Rank)
            }
            _ => Ok(self.lambda_interval(lo, hi)?.0),
        }
    }

    /// Searches `pairs` for a failure of `|A∪C, B∩D| <= |C,D|`, where each pair
    /// `((A,B), (C,D))` must satisfy `(B,A) <= (C,D)`.
    pub fn grounded_counterexample(
        &self,
        pairs: &[(Separation, Separation)],
    ) -> Result<Option<(Separation, Separation)>> {
        for &(s1, s2) in pairs {
            if !s1.invert().leq(s2) {
                return Err(Error::Precondition(format!("{} is not below {}", s1.invert(), s2)));
            }
            if self.order(s1.join(s2)) > self.order(s2) {
                return Ok(Some((s1, s2)));
            }
        }
        Ok(None)
    }

    pub fn is_grounded_sample(&self, pairs: &[(Separation, Separation)]) -> Result<bool> {
        Ok(self.grounded_counterexample(pairs)?.is_none())
    }
}

/// Iterator over an interval of a universe.
///
/// Each ground element independently lies in the left side only, the right
/// side only, or both; the bounds fix some of these choices and the
/// remaining ones are enumerated in mixed radix, after which the universe's
/// own condition filters the result.
pub struct Interval<'a> {
    universe: &'a Universe,
    base: Separation,
    free: Vec<(usize, &'static [u8])>,
    counter: Vec<usize>,
    done: bool,
}

const LEFT: u8 = 1;
const RIGHT: u8 = 2;
const BOTH: u8 = 3;

impl<'a> Interval<'a> {
    fn new(universe: &'a Universe, lo: Separation, hi: Separation) -> Interval<'a> {
        let bip = universe.is_bipartitions();
        let mut base = Separation::new(Subset::EMPTY, Subset::EMPTY);
        let mut free = Vec::new();
        let mut done = false;
        for x in 0..universe.size() {
            let can_left = hi.left.contains(x);
            let must_left = lo.left.contains(x);
            let can_right = lo.right.contains(x);
            let must_right = hi.right.contains(x);
            let options: Vec<u8> = [LEFT, RIGHT, BOTH]
                .into_iter()
                .filter(|&o| {
                    let l = o & LEFT != 0;
                    let r = o & RIGHT != 0;
                    (l || !must_left)
                        && (!l || can_left)
                        && (r || !must_right)
                        && (!r || can_right)
                        && !(bip && o == BOTH)
                })
                .collect();
            match options.as_slice() {
                [] => done = true,
                [only] => {
                    if only & LEFT != 0 {
                        base.left.insert(x);
                    }
                    if only & RIGHT != 0 {
                        base.right.insert(x);
                    }
                }
                [LEFT, RIGHT] => free.push((x, &[LEFT, RIGHT][..])),
                [LEFT, BOTH] => free.push((x, &[LEFT, BOTH][..])),
                [RIGHT, BOTH] => free.push((x, &[RIGHT, BOTH][..])),
                _ => free.push((x, &[LEFT, RIGHT, BOTH][..])),
            }
        }
        let counter = vec![0; free.len()];
        Interval { universe, base, free, counter, done }
    }

    fn current(&self) -> Separation {
        let mut s = self.base;
        for (&(x, options), &c) in self.free.iter().zip(&self.counter) {
            let o = options[c];
            if o & LEFT != 0 {
                s.left.insert(x);
            }
            if o & RIGHT != 0 {
                s.right.insert(x);
            }
        }
        s
    }

    fn advance(&mut self) {
        for (i, c) in self.counter.iter_mut().enumerate() {
            *c += 1;
            if *c < self.free[i].1.len() {
                return;
            }
            *c = 0;
        }
        self.done = true;
    }
}

impl Iterator for Interval<'_> {
    type Item = Separation;

    fn next(&mut self) -> Option<Separation> {
        while !self.done {
            let s = self.current();
            self.advance();
            if self.universe.contains(s) {
                return Some(s);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> Subset {
        Subset::from_elements(v.iter().copied())
    }

    fn sep(a: &[usize], b: &[usize]) -> Separation {
        Separation::new(set(a), set(b))
    }

    fn k3() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn inversion_and_order_relation() {
        let s = sep(&[0, 1], &[1, 2]);
        assert_eq!(s.invert(), sep(&[1, 2], &[0, 1]));
        assert_eq!(s.invert().invert(), s);
        assert!(sep(&[0], &[0, 1, 2]).leq(s));
        assert!(!s.leq(sep(&[0], &[0, 1, 2])));
        assert!(s.leq(s));
    }

    #[test]
    fn corners_on_p3_and_c4() {
        let a = sep(&[0], &[0, 1, 2]);
        let b = sep(&[0, 1], &[1, 2]);
        assert_eq!(a.join(b), b);
        assert_eq!(a.meet(b), a);
        let c4 = Universe::graph(&Graph::cycle(4)).unwrap();
        let j = sep(&[0, 1, 2], &[2, 3, 0]).join(sep(&[1, 2, 3], &[3, 0, 1]));
        assert_eq!(j, sep(&[0, 1, 2, 3], &[0, 3]));
        assert!(c4.contains(j));
        assert!(!sep(&[0, 1, 2], &[0, 2, 3]).is_nested(sep(&[1, 2, 3], &[0, 1, 3])));
        let s = sep(&[0, 1, 2], &[0, 2, 3]);
        assert!(s.is_nested(s.invert()));
        assert!(c4.bottom().is_nested(s));
    }

    #[test]
    fn graph_universe_membership() {
        let p3 = Universe::graph(&Graph::path(3)).unwrap();
        assert!(p3.contains(sep(&[0, 1], &[1, 2])));
        assert!(!p3.contains(sep(&[0], &[1, 2])));
        assert!(!p3.contains(sep(&[0], &[2])));
        let k3 = Universe::graph(&k3()).unwrap();
        assert!(!k3.contains(sep(&[0, 1], &[1, 2])));
        assert!(k3.contains(sep(&[0, 1, 2], &[0, 1, 2])));
    }

    #[test]
    fn orders() {
        let p3 = Universe::graph(&Graph::path(3)).unwrap();
        assert_eq!(p3.order(sep(&[0, 1], &[1, 2])), 1);
        assert_eq!(p3.order(sep(&[0, 1, 2], &[0, 1, 2])), 3);
        let m = Universe::bipartitions(RankOracle::graphic(&k3()).unwrap());
        assert_eq!(m.order(sep(&[0], &[1, 2])), 1);
        assert_eq!(m.order(m.top()), 0);
        assert_eq!(m.order(Separation::new(m.full(), m.full())), 2);
    }

    #[test]
    fn stars_and_sizes() {
        let p3 = Universe::graph(&Graph::path(3)).unwrap();
        let pair = [sep(&[0], &[0, 1, 2]), sep(&[2], &[0, 1, 2])];
        assert!(p3.is_star(&pair));
        assert_eq!(p3.star_size(&pair).unwrap(), 3);
        let twice = [sep(&[0, 1], &[1, 2]), sep(&[0, 1], &[1, 2])];
        assert!(!p3.is_star(&twice));
        assert_eq!(p3.star_size(&twice), Err(Error::NotAStar));
        assert_eq!(p3.star_size(&[sep(&[0, 1], &[1, 2])]).unwrap(), 2);
        assert_eq!(p3.star_size(&[]).unwrap(), 3);
        let m = Universe::bipartitions(RankOracle::graphic(&k3()).unwrap());
        let sigma = [sep(&[0], &[1, 2]), sep(&[1], &[0, 2])];
        assert_eq!(m.star_size(&sigma).unwrap(), 2);
    }

    #[test]
    fn interval_enumeration_counts() {
        // P3 has 3 vertices; its separations are the pairs (A,B) covering V
        // with no edge between A∖B and B∖A.
        let g = Graph::path(3);
        let p3 = Universe::graph(&g).unwrap();
        let all = p3.enumerate_all(8).unwrap();
        let mut brute = Vec::new();
        for a in Subset::full(3).subsets() {
            for b in Subset::full(3).subsets() {
                let s = Separation::new(a, b);
                if (a | b) == Subset::full(3) && !g.joins(a - b, b - a) {
                    brute.push(s);
                }
            }
        }
        let mut got = all.clone();
        got.sort();
        brute.sort();
        assert_eq!(got, brute);
        let m = Universe::bipartitions(RankOracle::uniform(2, 4).unwrap());
        assert_eq!(m.enumerate_all(8).unwrap().len(), 16);
    }

    #[test]
    fn lambda_examples() {
        let p3 = Universe::graph(&Graph::path(3)).unwrap();
        let (value, witness) = p3.lambda_interval(sep(&[0], &[0, 1, 2]), sep(&[0, 1, 2], &[2])).unwrap();
        assert_eq!(value, 1);
        assert_eq!(p3.order(witness), 1);
        assert_eq!(p3.lambda(sep(&[0], &[0, 1, 2]), sep(&[0, 1, 2], &[2])).unwrap(), 1);
        let s = sep(&[0, 1], &[1, 2]);
        assert_eq!(p3.lambda_interval(s, s).unwrap(), (1, s));
        assert!(p3.lambda_interval(s, sep(&[0], &[0, 1, 2])).is_err());

        let m = Universe::bipartitions(RankOracle::graphic(&k3()).unwrap());
        let lo = sep(&[0], &[1, 2]);
        let hi = sep(&[1], &[0, 2]).invert();
        assert_eq!(m.lambda_interval(lo, hi).unwrap().0, 1);
    }

    #[test]
    fn groundedness() {
        let p3 = Universe::graph(&Graph::path(3)).unwrap();
        let all = p3.enumerate_all(8).unwrap();
        let pairs: Vec<_> =
            all.iter().flat_map(|&a| all.iter().map(move |&b| (a, b))).filter(|(a, b)| a.invert().leq(*b)).collect();
        assert!(p3.is_grounded_sample(&pairs).unwrap());
        assert!(p3.is_grounded_sample(&[(sep(&[0], &[0, 1, 2]), sep(&[0, 1], &[1, 2]))]).is_err());
    }
}
