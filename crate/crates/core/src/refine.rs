//! Improvement loops producing linked and lean S-trees.
//!
//! Each iteration finds a violation, picks a minimum-order separation
//! `(X,Y)` in the relevant interval (nested with as many tree labels as
//! possible), shifts two copies of the tree onto `(X,Y)` and `(Y,X)`, and
//! glues them along the new edge. A lexicographic potential over
//! order/size thresholds strictly decreases each time.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{StarFamily, StarFamilyKind};
use crate::rank::Rank;
use crate::separation::{Separation, SeparationSpec, Universe};
use crate::stree::{glue, shift, Dart, GluePart, STree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Linked,
    Lean,
    Combined,
}

/// Per-threshold counts, from level `top` down to 0.
///
/// For each `p` the edge part counts edges of order `>= p` and the number
/// of edges minus components of the forest they form; the vertex part does
/// the same for vertices with star size `>= p` and the subforest they
/// induce. A profile precedes another if it is lexicographically smaller.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PotentialProfile {
    pub mode: Mode,
    pub top: Rank,
    pub levels: Vec<Vec<i64>>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.0[v] != v {
            self.0[v] = self.0[self.0[v]];
            v = self.0[v];
        }
        v
    }

    /// Returns true if `a` and `b` were in different classes.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
        a != b
    }
}

impl PotentialProfile {
    pub fn compute(universe: &Universe, tree: &STree, mode: Mode, top: Rank) -> PotentialProfile {
        let orders: Vec<Rank> = (0..tree.num_edges()).map(|e| universe.order(tree.label(2 * e))).collect();
        let sizes: Vec<Rank> = (0..tree.num_vertices()).map(|t| universe.star_size_unchecked(&tree.star(t))).collect();
        let mut levels = Vec::new();
        for p in (0..=top).rev() {
            let mut level = Vec::new();
            if mode != Mode::Lean {
                let mut uf = UnionFind::new(tree.num_vertices());
                let mut touched = vec![false; tree.num_vertices()];
                let mut count = 0;
                let mut merges = 0;
                for (e, &(u, v)) in tree.edges().iter().enumerate() {
                    if orders[e] >= p {
                        count += 1;
                        touched[u] = true;
                        touched[v] = true;
                        if uf.union(u, v) {
                            merges += 1;
                        }
                    }
                }
                let vertices = touched.iter().filter(|&&b| b).count() as i64;
                let components = vertices - merges;
                level.push(count);
                level.push(count - components);
            }
            if mode != Mode::Linked {
                let mut uf = UnionFind::new(tree.num_vertices());
                let count = sizes.iter().filter(|&&s| s >= p).count() as i64;
                let mut merges = 0;
                for &(u, v) in tree.edges() {
                    if sizes[u] >= p && sizes[v] >= p && uf.union(u, v) {
                        merges += 1;
                    }
                }
                let components = count - merges;
                level.push(count);
                level.push(count - components);
            }
            levels.push(level);
        }
        PotentialProfile { mode, top, levels }
    }

    /// Lexicographic comparison from the highest level down.
    pub fn compare(&self, other: &PotentialProfile) -> Ordering {
        self.levels.cmp(&other.levels)
    }

    /// True iff `self` is strictly below `other`.
    pub fn precedes(&self, other: &PotentialProfile) -> bool {
        self.compare(other) == Ordering::Less
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkedViolation {
    pub e: Dart,
    pub f: Dart,
    pub ell: Rank,
    pub witness: SeparationSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeanViolation {
    pub t: usize,
    pub t2: usize,
    pub add: SeparationSpec,
    pub add2: SeparationSpec,
    pub ell: Rank,
}

struct RawLinked {
    e: Dart,
    f: Dart,
    ell: Rank,
}

struct RawLean {
    t: usize,
    t2: usize,
    add: Separation,
    add2: Separation,
    ell: Rank,
}

/// λ values memoised by interval endpoints.
#[derive(Default)]
pub struct LambdaCache(HashMap<(Separation, Separation), Rank>);

impl LambdaCache {
    pub fn get(&mut self, universe: &Universe, lo: Separation, hi: Separation) -> Result<Rank> {
        if let Some(&v) = self.0.get(&(lo, hi)) {
            return Ok(v);
        }
        let v = universe.lambda(lo, hi)?;
        self.0.insert((lo, hi), v);
        Ok(v)
    }
}

fn scan_linked(universe: &Universe, tree: &STree, cache: &mut LambdaCache) -> Result<Option<RawLinked>> {
    let orders: Vec<Rank> = tree.darts().map(|d| universe.order(tree.label(d))).collect();
    for e in tree.darts() {
        // Walk outwards from the head of e keeping the minimum order seen.
        let mut stack = vec![(tree.head(e), e / 2, orders[e])];
        let mut found: Vec<(Dart, Rank)> = Vec::new();
        while let Some((u, from_edge, min_so_far)) = stack.pop() {
            for f in tree.in_darts(u).into_iter().map(|d| d ^ 1) {
                if f / 2 == from_edge {
                    continue;
                }
                let m = min_so_far.min(orders[f]);
                found.push((f, m));
                stack.push((tree.head(f), f / 2, m));
            }
        }
        found.sort_unstable();
        for (f, m) in found {
            let ell = cache.get(universe, tree.label(e), tree.label(f))?;
            if ell < m {
                return Ok(Some(RawLinked { e, f, ell }));
            }
        }
    }
    Ok(None)
}

/// The first pair of darts `e <= f` (in increasing id order) whose
/// interval connectivity is below every label order between them.
pub fn find_linked_violation(universe: &Universe, tree: &STree) -> Result<Option<LinkedViolation>> {
    let mut cache = LambdaCache::default();
    Ok(match scan_linked(universe, tree, &mut cache)? {
        None => None,
        Some(v) => {
            let (ell, witness) = universe.lambda_interval(tree.label(v.e), tree.label(v.f))?;
            Some(LinkedViolation { e: v.e, f: v.f, ell, witness: witness.into() })
        }
    })
}

/// Minimum label order on the path from `t` to every vertex; `Rank::MAX`
/// for `t` itself.
fn path_minima(universe: &Universe, tree: &STree, t: usize) -> Vec<Rank> {
    let mut out = vec![Rank::MAX; tree.num_vertices()];
    let mut stack = vec![(t, usize::MAX)];
    while let Some((u, from_edge)) = stack.pop() {
        for d in tree.in_darts(u) {
            let f = d ^ 1;
            if f / 2 == from_edge {
                continue;
            }
            let w = tree.head(f);
            out[w] = out[u].min(universe.order(tree.label(f)));
            stack.push((w, f / 2));
        }
    }
    out
}

fn scan_lean(
    universe: &Universe,
    tree: &STree,
    family: &StarFamilyKind,
    budget: usize,
    cache: &mut LambdaCache,
) -> Result<Option<RawLean>> {
    let n = tree.num_vertices();
    let mut candidates = Vec::with_capacity(n);
    for t in 0..n {
        candidates.push(family.addable_candidates(universe, tree, t, budget)?);
    }
    let rank = universe.rank();
    let equal_sizes = universe.graph_ref().is_some() && matches!(rank.kind(), crate::rank::RankKind::Cardinality);
    // Vertices with identical candidate lists and identical distances behave
    // identically; remember pairs already cleared.
    let mut cleared: HashMap<(usize, usize, Rank), ()> = HashMap::new();
    let mut first_with: HashMap<&[Separation], usize> = HashMap::new();
    let rep: Vec<usize> = (0..n).map(|t| *first_with.entry(candidates[t].as_slice()).or_insert(t)).collect();
    for t in 0..n {
        let minima = path_minima(universe, tree, t);
        for t2 in t..n {
            let path_min = minima[t2];
            let key = (rep[t].min(rep[t2]), rep[t].max(rep[t2]), if t == t2 { Rank::MIN } else { path_min });
            if cleared.contains_key(&key) {
                continue;
            }
            for &a in &candidates[t] {
                let ra = rank.rank(a.left);
                for &b in &candidates[t2] {
                    if equal_sizes && a.left.len() != b.left.len() {
                        continue;
                    }
                    if !a.leq(b.invert()) {
                        continue;
                    }
                    let rb = rank.rank(b.left);
                    let need = ra.min(rb);
                    if path_min == 0 || need == 0 {
                        continue;
                    }
                    let ell = cache.get(universe, a, b.invert())?;
                    if ell < need && path_min > ell {
                        return Ok(Some(RawLean { t, t2, add: a, add2: b, ell }));
                    }
                }
            }
            cleared.insert(key, ());
        }
    }
    Ok(None)
}

/// The first violating pair of canonical addable separations, scanning
/// vertex pairs `t <= t'` in id order.
pub fn find_lean_violation(
    universe: &Universe,
    tree: &STree,
    family: &StarFamilyKind,
    budget: usize,
) -> Result<Option<LeanViolation>> {
    let mut cache = LambdaCache::default();
    Ok(scan_lean(universe, tree, family, budget, &mut cache)?.map(|v| LeanViolation {
        t: v.t,
        t2: v.t2,
        add: v.add.into(),
        add2: v.add2.into(),
        ell: v.ell,
    }))
}

/// Among the minimum-order separations in `[lo, hi]`, one nested with the
/// most edge labels of `tree`; ties go to the canonically least.
pub fn choose_shift_separation(
    universe: &Universe,
    lo: Separation,
    hi: Separation,
    tree: &STree,
) -> Result<Separation> {
    let (_, minimizers) = universe.interval_minimizers(lo, hi)?;
    let labels: Vec<Separation> = tree.darts().step_by(2).map(|d| tree.label(d)).collect();
    let mut best: Option<(usize, Separation)> = None;
    for s in minimizers {
        let score = labels.iter().filter(|l| l.is_nested(s)).count();
        if best.is_none_or(|(b, _)| score > b) {
            best = Some((score, s));
        }
    }
    best.map(|(_, s)| s).ok_or(Error::EmptyInterval)
}

/// Removes the branch behind each dart `x -> s` labelled `(A, V)` whenever
/// the star at `s` stays in the family without it. Such a branch only
/// repeats information already present at `s`; dropping it keeps every
/// remaining star size and label order.
pub fn prune(universe: &Universe, tree: &STree, family: &StarFamilyKind) -> STree {
    if matches!(family, StarFamilyKind::Tk { .. }) {
        return tree.clone();
    }
    let full = universe.full();
    let mut current = tree.clone();
    loop {
        let found = current.darts().find(|&d| {
            current.label(d).right == full && {
                let s = current.head(d);
                let rest: Vec<Separation> =
                    current.in_darts(s).into_iter().filter(|&x| x != d).map(|x| current.label(x)).collect();
                family.contains(universe, &rest)
            }
        });
        let Some(d) = found else { return current };
        let keep = current.head_side(d);
        current = current.induced(&keep).0;
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RefineConfig {
    /// Iteration cap; `None` uses `10·k·|E(T)|² + 1000`.
    pub max_iterations: Option<usize>,
    /// Largest number of addable candidates enumerated at one vertex.
    pub candidate_budget: usize,
    /// Remove redundant branches after each step.
    pub prune: bool,
    /// Record one trace entry per iteration.
    pub trace: bool,
}

impl Default for RefineConfig {
    fn default() -> Self {
        RefineConfig { max_iterations: None, candidate_budget: 1 << 16, prune: false, trace: false }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepViolation {
    Linked(LinkedViolation),
    Lean(LeanViolation),
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub violation: StepViolation,
    pub chosen: SeparationSpec,
    pub potential_before: PotentialProfile,
    pub potential_after: PotentialProfile,
    pub vertices_after: usize,
}

/// Counts of runtime checks performed during a run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ClaimCounts {
    pub edge_copies: usize,
    pub vertex_copies: usize,
    pub glued_sizes: usize,
    pub potential_decreases: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RefineOutcome {
    #[serde(skip)]
    pub tree: STree,
    pub iterations: usize,
    pub claims: ClaimCounts,
    /// Combined-mode iterations whose potential did not strictly decrease.
    pub potential_failures: Vec<usize>,
    pub trace: Vec<TraceRecord>,
}

fn check_input(universe: &Universe, tree: &STree, family: &StarFamilyKind) -> Result<()> {
    let report = crate::family::validate_stree(universe, tree, Some(family));
    if !report.valid {
        return Err(Error::Precondition(format!("input is not a tame S-tree over {}: {report:?}", family.name())));
    }
    Ok(())
}

struct Runner<'a> {
    universe: &'a Universe,
    family: StarFamilyKind,
    config: &'a RefineConfig,
    mode: Mode,
    top: Rank,
    cache: LambdaCache,
    claims: ClaimCounts,
    potential_failures: Vec<usize>,
    trace: Vec<TraceRecord>,
}

/// Per new vertex/edge, the original vertex/edge it copies (if any) and
/// which of the two shifted copies it came from.
struct Origins {
    vertices: Vec<Option<(usize, u8)>>,
    edges: Vec<Vec<(usize, u8)>>,
}

impl<'a> Runner<'a> {
    fn potential(&self, tree: &STree) -> PotentialProfile {
        PotentialProfile::compute(self.universe, tree, self.mode, self.top)
    }

    fn invariant(&self, what: &str) -> Error {
        Error::Invariant(what.to_string())
    }

    /// Checks that every vertex/edge copy is no larger than its original,
    /// and that whenever some copy of an item above `ell` keeps its value,
    /// every other copy drops to `ell` or below.
    fn check_copies(&mut self, before: &STree, after: &STree, origins: &Origins, ell: Rank) -> Result<()> {
        let u = self.universe;
        let mut edge_copies: HashMap<usize, Vec<Rank>> = HashMap::new();
        for (e, list) in origins.edges.iter().enumerate() {
            for &(old, _) in list {
                edge_copies.entry(old).or_default().push(u.order(after.label(2 * e)));
            }
        }
        for (old, copies) in edge_copies {
            let original = u.order(before.label(2 * old));
            self.claims.edge_copies += copies.len();
            if copies.iter().any(|&c| c > original) {
                return Err(self.invariant(&format!("copy of tree edge {old} has larger order than the original")));
            }
            if original > ell {
                let kept = copies.iter().filter(|&&c| c == original).count();
                if kept >= 1 && copies.iter().filter(|&&c| c > ell).count() > 1 {
                    return Err(self.invariant(&format!("both copies of tree edge {old} keep order above {ell}")));
                }
            }
        }
        if self.mode != Mode::Linked {
            let mut vertex_copies: HashMap<usize, Vec<Rank>> = HashMap::new();
            for (v, origin) in origins.vertices.iter().enumerate() {
                if let Some((old, _)) = origin {
                    vertex_copies.entry(*old).or_default().push(u.star_size_unchecked(&after.star(v)));
                }
            }
            for (old, copies) in vertex_copies {
                let original = u.star_size_unchecked(&before.star(old));
                self.claims.vertex_copies += copies.len();
                if copies.iter().any(|&c| c > original) {
                    return Err(self.invariant(&format!("copy of tree vertex {old} has a larger star")));
                }
                if original > ell {
                    let kept = copies.iter().filter(|&&c| c == original).count();
                    if kept >= 1 && copies.iter().filter(|&&c| c > ell).count() > 1 {
                        return Err(
                            self.invariant(&format!("both copies of tree vertex {old} keep star size above {ell}"))
                        );
                    }
                }
            }
        }
        Ok(())
    }

    fn check_family(&self, tree: &STree) -> Result<()> {
        for t in 0..tree.num_vertices() {
            if !self.family.contains(self.universe, &tree.star(t)) {
                return Err(self.invariant(&format!("star at {t} left the family {}", self.family.name())));
            }
        }
        Ok(())
    }

    fn linked_step(&mut self, tree: &STree, v: &RawLinked) -> Result<(STree, Origins, Separation)> {
        let lo = tree.label(v.e);
        let hi = tree.label(v.f);
        let xy = choose_shift_separation(self.universe, lo, hi, tree)?;
        if self.universe.order(xy) != v.ell {
            return Err(self.invariant("flow and enumeration disagree on the interval minimum"));
        }
        let (t1, m1) = shift(tree, v.e, xy)?;
        let (t2, m2) = shift(tree, v.f ^ 1, xy.invert())?;
        let e1_edge = m1.edges.iter().position(|&x| x == v.e / 2).expect("base edge kept");
        let e1 = t1.dart_from(e1_edge, m1.vertices.binary_search(&tree.tail(v.e)).expect("tail kept"));
        let f2_edge = m2.edges.iter().position(|&x| x == v.f / 2).expect("base edge kept");
        let f2 = t2.dart_from(f2_edge, m2.vertices.binary_search(&tree.tail(v.f)).expect("tail kept"));
        let (glued, gm) = glue(&t1, e1, &t2, f2)?;
        let origins = Origins {
            vertices: gm
                .vertices
                .iter()
                .map(|p| match *p {
                    GluePart::First(x) => Some((m1.vertices[x], 1)),
                    GluePart::Second(x) => Some((m2.vertices[x], 2)),
                    GluePart::Joint => None,
                })
                .collect(),
            edges: gm
                .edges
                .iter()
                .map(|p| match *p {
                    GluePart::First(x) => vec![(m1.edges[x], 1)],
                    GluePart::Second(x) => vec![(m2.edges[x], 2)],
                    GluePart::Joint => vec![(v.e / 2, 1), (v.f / 2, 2)],
                })
                .collect(),
        };
        Ok((glued, origins, xy))
    }

    fn lean_step(&mut self, tree: &STree, v: &RawLean) -> Result<(STree, Origins, Separation)> {
        let xy = choose_shift_separation(self.universe, v.add, v.add2.invert(), tree)?;
        if self.universe.order(xy) != v.ell {
            return Err(self.invariant("flow and enumeration disagree on the interval minimum"));
        }
        let mut a1 = tree.clone();
        let (_, d1) = a1.add_leaf(v.t, v.add);
        let mut a2 = tree.clone();
        let (_, d2) = a2.add_leaf(v.t2, v.add2);
        let (s1, m1) = shift(&a1, d1, xy)?;
        let (s2, m2) = shift(&a2, d2, xy.invert())?;
        let leaf1 = m1.vertices.binary_search(&tree.num_vertices()).expect("leaf kept");
        let e1 = s1.dart_from(m1.edges.iter().position(|&x| x == d1 / 2).expect("leaf edge"), leaf1);
        let leaf2 = m2.vertices.binary_search(&tree.num_vertices()).expect("leaf kept");
        let f2 = s2.dart_from(m2.edges.iter().position(|&x| x == d2 / 2).expect("leaf edge"), leaf2) ^ 1;
        let (glued, gm) = glue(&s1, e1, &s2, f2)?;
        let n = tree.num_vertices();
        let m = tree.num_edges();
        let origins = Origins {
            vertices: gm
                .vertices
                .iter()
                .map(|p| match *p {
                    GluePart::First(x) => Some(m1.vertices[x]).filter(|&o| o < n).map(|o| (o, 1)),
                    GluePart::Second(x) => Some(m2.vertices[x]).filter(|&o| o < n).map(|o| (o, 2)),
                    GluePart::Joint => None,
                })
                .collect(),
            edges: gm
                .edges
                .iter()
                .map(|p| match *p {
                    GluePart::First(x) if m1.edges[x] < m => vec![(m1.edges[x], 1)],
                    GluePart::Second(x) if m2.edges[x] < m => vec![(m2.edges[x], 2)],
                    _ => Vec::new(),
                })
                .collect(),
        };
        // The glued edge joins the copies of t (first part) and t' (second
        // part); both stars must be strictly smaller than before.
        let joint = gm.edges.iter().position(|p| *p == GluePart::Joint).expect("joint edge");
        let (u2, u1) = glued.edges()[joint];
        let before_t = self.universe.star_size_unchecked(&tree.star(v.t));
        let before_t2 = self.universe.star_size_unchecked(&tree.star(v.t2));
        let after_t = self.universe.star_size_unchecked(&glued.star(u1));
        let after_t2 = self.universe.star_size_unchecked(&glued.star(u2));
        self.claims.glued_sizes += 2;
        if after_t >= before_t || after_t2 >= before_t2 {
            return Err(self.invariant(&format!(
                "glued stars did not shrink: {before_t} -> {after_t}, {before_t2} -> {after_t2}"
            )));
        }
        Ok((glued, origins, xy))
    }

    fn run(&mut self, mut tree: STree) -> Result<RefineOutcome> {
        let cap = self.config.max_iterations.unwrap_or_else(|| {
            let e = tree.num_edges().max(1);
            10 * (self.family.order_bound().max(1) as usize) * e * e + 1000
        });
        let mut iterations = 0;
        loop {
            let mut cache = std::mem::take(&mut self.cache);
            let linked = if self.mode != Mode::Lean { scan_linked(self.universe, &tree, &mut cache)? } else { None };
            let lean = if linked.is_none() && self.mode != Mode::Linked {
                scan_lean(self.universe, &tree, &self.family, self.config.candidate_budget, &mut cache)?
            } else {
                None
            };
            self.cache = cache;
            let (violation, ell, (glued, origins, xy)) = match (linked, lean) {
                (Some(v), _) => {
                    let witness = self.universe.lambda_interval(tree.label(v.e), tree.label(v.f))?.1;
                    let report = LinkedViolation { e: v.e, f: v.f, ell: v.ell, witness: witness.into() };
                    (StepViolation::Linked(report), v.ell, self.linked_step(&tree, &v)?)
                }
                (None, Some(v)) => {
                    let report = LeanViolation { t: v.t, t2: v.t2, add: v.add.into(), add2: v.add2.into(), ell: v.ell };
                    (StepViolation::Lean(report), v.ell, self.lean_step(&tree, &v)?)
                }
                (None, None) => break,
            };
            if iterations == cap {
                return Err(Error::IterationCap(cap));
            }
            iterations += 1;
            self.check_copies(&tree, &glued, &origins, ell)?;
            self.check_family(&glued)?;
            let before = self.potential(&tree);
            let after = self.potential(&glued);
            if after.precedes(&before) {
                self.claims.potential_decreases += 1;
            } else if self.mode == Mode::Combined {
                self.potential_failures.push(iterations);
            } else {
                return Err(self.invariant(&format!("potential did not decrease in iteration {iterations}")));
            }
            let next = if self.config.prune { prune(self.universe, &glued, &self.family) } else { glued };
            if self.config.trace {
                self.trace.push(TraceRecord {
                    iteration: iterations,
                    violation,
                    chosen: xy.into(),
                    potential_before: before,
                    potential_after: self.potential(&next),
                    vertices_after: next.num_vertices(),
                });
            }
            tree = next;
        }
        Ok(RefineOutcome {
            tree,
            iterations,
            claims: std::mem::take(&mut self.claims),
            potential_failures: std::mem::take(&mut self.potential_failures),
            trace: std::mem::take(&mut self.trace),
        })
    }
}

fn refine(
    universe: &Universe,
    tree: &STree,
    family: &StarFamilyKind,
    config: &RefineConfig,
    mode: Mode,
) -> Result<RefineOutcome> {
    check_input(universe, tree, family)?;
    let top = family.order_bound().max(family.size_bound()).max(tree.max_star_size(universe));
    let mut runner = Runner {
        universe,
        family: *family,
        config,
        mode,
        top,
        cache: LambdaCache::default(),
        claims: ClaimCounts::default(),
        potential_failures: Vec::new(),
        trace: Vec::new(),
    };
    runner.run(tree.clone())
}

/// Refines a tame S-tree over `family` until it is linked.
pub fn refine_to_linked(
    universe: &Universe,
    tree: &STree,
    family: &StarFamilyKind,
    config: &RefineConfig,
) -> Result<RefineOutcome> {
    refine(universe, tree, family, config, Mode::Linked)
}

/// Refines a tame S-tree over `family` until no pair of canonical addable
/// separations violates leanness.
pub fn refine_to_lean(
    universe: &Universe,
    tree: &STree,
    family: &StarFamilyKind,
    config: &RefineConfig,
) -> Result<RefineOutcome> {
    refine(universe, tree, family, config, Mode::Lean)
}

/// Repairs linked violations first and lean violations once none remain,
/// tracking the four-part potential.
pub fn refine_combined(
    universe: &Universe,
    tree: &STree,
    family: &StarFamilyKind,
    config: &RefineConfig,
) -> Result<RefineOutcome> {
    refine(universe, tree, family, config, Mode::Combined)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::subset::Subset;

    fn set(v: &[usize]) -> Subset {
        Subset::from_elements(v.iter().copied())
    }

    fn sep(a: &[usize], b: &[usize]) -> Separation {
        Separation::new(set(a), set(b))
    }

    #[test]
    fn potential_of_single_edge() {
        let u = Universe::graph(&Graph::path(3)).unwrap();
        let t = STree::from_edge_labels(2, vec![(0, 1)], vec![sep(&[0, 1], &[1, 2])]).unwrap();
        let p = PotentialProfile::compute(&u, &t, Mode::Linked, 2);
        assert_eq!(p.levels, vec![vec![0, 0], vec![1, 0], vec![1, 0]]);
    }

    #[test]
    fn potential_order() {
        let u = Universe::graph(&Graph::path(4)).unwrap();
        let two = sep(&[0, 1, 2], &[1, 2, 3]);
        let one = sep(&[0, 1], &[1, 2, 3]);
        let a = STree::from_edge_labels(3, vec![(0, 1), (1, 2)], vec![two, two]).unwrap();
        let b = STree::from_edge_labels(3, vec![(0, 1), (1, 2)], vec![one, two]).unwrap();
        let pa = PotentialProfile::compute(&u, &a, Mode::Linked, 3);
        let pb = PotentialProfile::compute(&u, &b, Mode::Linked, 3);
        assert!(pb.precedes(&pa));
        assert!(!pa.precedes(&pb));
    }

    #[test]
    fn single_edge_is_linked() {
        let u = Universe::graph(&Graph::path(3)).unwrap();
        let t = STree::from_edge_labels(2, vec![(0, 1)], vec![sep(&[0, 1], &[1, 2])]).unwrap();
        assert!(find_linked_violation(&u, &t).unwrap().is_none());
        let out = refine_to_linked(&u, &t, &StarFamilyKind::Fk { k: 3 }, &RefineConfig::default()).unwrap();
        assert_eq!(out.iterations, 0);
        assert_eq!(out.tree, t);
    }

    #[test]
    fn one_point_interval_choice() {
        let u = Universe::graph(&Graph::path(3)).unwrap();
        let s = sep(&[0, 1], &[1, 2]);
        let t = STree::single_vertex();
        assert_eq!(choose_shift_separation(&u, s, s, &t).unwrap(), s);
    }

    #[test]
    fn single_bag_p3_becomes_lean() {
        let u = Universe::graph(&Graph::path(3)).unwrap();
        let fam = StarFamilyKind::Fk { k: 4 };
        let t = STree::single_vertex();
        let v = find_lean_violation(&u, &t, &fam, 1000).unwrap().unwrap();
        assert_eq!(v.ell, 1);
        for prune in [false, true] {
            let config = RefineConfig { prune, ..RefineConfig::default() };
            let out = refine_to_lean(&u, &t, &fam, &config).unwrap();
            assert!(find_lean_violation(&u, &out.tree, &fam, 1000).unwrap().is_none());
            assert_eq!(out.tree.max_star_size(&u), 2);
        }
    }
}
