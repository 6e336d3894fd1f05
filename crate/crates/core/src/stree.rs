//! S-trees: finite trees whose oriented edges carry separations.
//!
//! Edge `i` joins `edges[i] = (u, v)`; its two orientations are the darts
//! `2i` (`u -> v`) and `2i + 1` (`v -> u`). The label of a dart `s -> t` is
//! read as (side of `s`, side of `t`), so the star at `t` consists of the
//! labels of darts pointing into `t`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::separation::{Separation, SeparationSpec, Universe};
use crate::subset::Subset;

pub type Dart = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct STree {
    n: usize,
    edges: Vec<(usize, usize)>,
    labels: Vec<Separation>,
    incident: Vec<Vec<usize>>,
}

impl STree {
    /// Builds a tree from its edges and one label per dart (`2i`, `2i+1`).
    /// The labels need not be consistent; see `validate_stree`.
    pub fn from_dart_labels(n: usize, edges: Vec<(usize, usize)>, labels: Vec<Separation>) -> Result<STree> {
        if n == 0 {
            return Err(Error::Precondition("a tree needs at least one vertex".into()));
        }
        if edges.len() + 1 != n {
            return Err(Error::Precondition(format!("{} edges cannot form a tree on {n} vertices", edges.len())));
        }
        if labels.len() != 2 * edges.len() {
            return Err(Error::Precondition("need one label per oriented edge".into()));
        }
        let mut incident = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n || u == v {
                return Err(Error::Precondition(format!("bad tree edge ({u}, {v})")));
            }
            incident[u].push(i);
            incident[v].push(i);
        }
        let tree = STree { n, edges, labels, incident };
        if tree.component(0, None).len() != n {
            return Err(Error::Precondition("tree edges do not connect all vertices".into()));
        }
        Ok(tree)
    }

    /// Builds a tree from one label per edge, read as the label of `u -> v`;
    /// the reverse orientation gets the inverse.
    pub fn from_edge_labels(n: usize, edges: Vec<(usize, usize)>, labels: Vec<Separation>) -> Result<STree> {
        if labels.len() != edges.len() {
            return Err(Error::Precondition("need one label per edge".into()));
        }
        let darts = labels.iter().flat_map(|&s| [s, s.invert()]).collect();
        STree::from_dart_labels(n, edges, darts)
    }

    pub fn single_vertex() -> STree {
        STree { n: 1, edges: Vec::new(), labels: Vec::new(), incident: vec![Vec::new()] }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn darts(&self) -> std::ops::Range<Dart> {
        0..2 * self.edges.len()
    }

    pub fn tail(&self, d: Dart) -> usize {
        let (u, v) = self.edges[d / 2];
        if d.is_multiple_of(2) {
            u
        } else {
            v
        }
    }

    pub fn head(&self, d: Dart) -> usize {
        self.tail(d ^ 1)
    }

    pub fn reverse(d: Dart) -> Dart {
        d ^ 1
    }

    pub fn label(&self, d: Dart) -> Separation {
        self.labels[d]
    }

    /// The dart of edge `e` pointing from `from` to the other end.
    pub fn dart_from(&self, e: usize, from: usize) -> Dart {
        if self.edges[e].0 == from {
            2 * e
        } else {
            2 * e + 1
        }
    }

    pub fn degree(&self, t: usize) -> usize {
        self.incident[t].len()
    }

    pub fn neighbors(&self, t: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident[t].iter().map(move |&e| self.head(self.dart_from(e, t)))
    }

    /// Darts with head `t`, in edge-id order.
    pub fn in_darts(&self, t: usize) -> Vec<Dart> {
        self.incident[t].iter().map(|&e| self.dart_from(e, t) ^ 1).collect()
    }

    /// The multiset `σ_t` of labels of darts pointing into `t`.
    pub fn star(&self, t: usize) -> Vec<Separation> {
        self.in_darts(t).into_iter().map(|d| self.labels[d]).collect()
    }

    /// `⋂ B` over the star at `t`; the whole ground set for an isolated vertex.
    pub fn interior(&self, t: usize, full: Subset) -> Subset {
        self.star(t).iter().fold(full, |acc, s| acc & s.right)
    }

    /// Vertices reachable from `start` without using edge `skip`.
    pub fn component(&self, start: usize, skip: Option<usize>) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[start] = true;
        let mut out = vec![start];
        let mut i = 0;
        while i < out.len() {
            let u = out[i];
            i += 1;
            for &e in &self.incident[u] {
                if Some(e) == skip {
                    continue;
                }
                let w = self.head(self.dart_from(e, u));
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                }
            }
        }
        out
    }

    /// Vertices on the head side of `d` (the component of `T - e` containing
    /// the head).
    pub fn head_side(&self, d: Dart) -> Vec<usize> {
        self.component(self.head(d), Some(d / 2))
    }

    /// Darts `f` with `d < f`: those lying beyond the head of `d` and
    /// pointing away from it, in breadth-first order.
    pub fn darts_above(&self, d: Dart) -> Vec<Dart> {
        let mut out = Vec::new();
        let mut queue = VecDeque::from([(self.head(d), d / 2)]);
        while let Some((u, from_edge)) = queue.pop_front() {
            for &e in &self.incident[u] {
                if e != from_edge {
                    let f = self.dart_from(e, u);
                    out.push(f);
                    queue.push_back((self.head(f), e));
                }
            }
        }
        out
    }

    /// The darts of the path from `a` to `b`, each oriented towards `b`.
    pub fn path_darts(&self, a: usize, b: usize) -> Vec<Dart> {
        if a == b {
            return Vec::new();
        }
        let mut pred: Vec<Option<Dart>> = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[a] = true;
        let mut queue = VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            if u == b {
                break;
            }
            for &e in &self.incident[u] {
                let f = self.dart_from(e, u);
                let w = self.head(f);
                if !seen[w] {
                    seen[w] = true;
                    pred[w] = Some(f);
                    queue.push_back(w);
                }
            }
        }
        let mut path = Vec::new();
        let mut v = b;
        while v != a {
            let f = pred[v].expect("tree is connected");
            path.push(f);
            v = self.tail(f);
        }
        path.reverse();
        path
    }

    /// Darts `g` with `e <= g <= f`, from `e` to `f`. Requires `e <= f`.
    pub fn darts_between(&self, e: Dart, f: Dart) -> Vec<Dart> {
        if e == f {
            return vec![e];
        }
        let mut out = vec![e];
        out.extend(self.path_darts(self.head(e), self.tail(f)));
        out.push(f);
        out
    }

    /// Tree order on darts: `e <= f` iff `e = f` or `f` lies beyond the head
    /// of `e` and points away from it.
    pub fn dart_leq(&self, e: Dart, f: Dart) -> bool {
        if e == f {
            return true;
        }
        if e / 2 == f / 2 {
            return false;
        }
        let p = self.path_darts(self.tail(e), self.head(f));
        p.first() == Some(&e) && p.last() == Some(&f)
    }

    pub fn labels(&self) -> &[Separation] {
        &self.labels
    }

    pub fn set_edge_label(&mut self, d: Dart, s: Separation) {
        self.labels[d] = s;
        self.labels[d ^ 1] = s.invert();
    }

    /// Adds a leaf attached to `t`; the dart `leaf -> t` gets label `s`.
    /// Returns the new vertex and that dart.
    pub fn add_leaf(&mut self, t: usize, s: Separation) -> (usize, Dart) {
        let leaf = self.n;
        let e = self.edges.len();
        self.n += 1;
        self.edges.push((leaf, t));
        self.labels.push(s);
        self.labels.push(s.invert());
        self.incident.push(vec![e]);
        self.incident[t].push(e);
        (leaf, 2 * e)
    }

    pub fn max_order(&self, universe: &Universe) -> i64 {
        self.darts().step_by(2).map(|d| universe.order(self.labels[d])).max().unwrap_or(i64::MIN)
    }

    pub fn max_star_size(&self, universe: &Universe) -> i64 {
        (0..self.n).map(|t| universe.star_size_unchecked(&self.star(t))).max().unwrap_or(0)
    }

    pub fn is_tame(&self, universe: &Universe) -> bool {
        (0..self.n).all(|t| universe.is_star(&self.star(t)))
    }

    /// Sub-tree induced on `keep`, with ids renumbered in increasing order of
    /// the old ids. Edge orientation and labels are preserved.
    pub fn induced(&self, keep: &[usize]) -> (STree, SubtreeMap) {
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in sorted.iter().enumerate() {
            new_id[v] = i;
        }
        let mut edges = Vec::new();
        let mut labels = Vec::new();
        let mut edge_map = Vec::new();
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if new_id[u] != usize::MAX && new_id[v] != usize::MAX {
                edges.push((new_id[u], new_id[v]));
                labels.push(self.labels[2 * i]);
                labels.push(self.labels[2 * i + 1]);
                edge_map.push(i);
            }
        }
        let tree = STree::from_dart_labels(sorted.len(), edges, labels).expect("induced connected subtree");
        (tree, SubtreeMap { vertices: sorted, edges: edge_map })
    }

    pub fn to_spec(&self) -> STreeSpec {
        STreeSpec {
            vertices: self.n,
            edges: self
                .edges
                .iter()
                .enumerate()
                .map(|(i, &(u, v))| STreeEdgeSpec {
                    from: u,
                    to: v,
                    label: self.labels[2 * i].into(),
                    reverse: Some(self.labels[2 * i + 1].into()),
                })
                .collect(),
        }
    }

    pub fn from_spec(spec: &STreeSpec, ground: usize) -> Result<STree> {
        let mut edges = Vec::new();
        let mut labels = Vec::new();
        for e in &spec.edges {
            edges.push((e.from, e.to));
            let s = e.label.to_separation(ground)?;
            labels.push(s);
            labels.push(match &e.reverse {
                Some(r) => r.to_separation(ground)?,
                None => s.invert(),
            });
        }
        STree::from_dart_labels(spec.vertices, edges, labels)
    }
}

/// Where the vertices and edges of a derived tree came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubtreeMap {
    /// `vertices[new] = old`.
    pub vertices: Vec<usize>,
    /// `edges[new] = old`; orientation is preserved.
    pub edges: Vec<usize>,
}

/// JSON interchange form of an S-tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct STreeSpec {
    pub vertices: usize,
    pub edges: Vec<STreeEdgeSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct STreeEdgeSpec {
    pub from: usize,
    pub to: usize,
    /// Label of the orientation `from -> to`.
    pub label: SeparationSpec,
    /// Label of `to -> from`; the inverse of `label` when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reverse: Option<SeparationSpec>,
}

/// Shifts the part of `tree` above `base` onto `target`.
///
/// The result is `T(base)`: the tail of `base` (now a leaf) plus the
/// component of `T - base` containing its head. Every dart `f >= base` gets
/// `α(f) ∨ target` and its reverse the inverse, so `base` itself ends up
/// labelled `target`.
pub fn shift(tree: &STree, base: Dart, target: Separation) -> Result<(STree, SubtreeMap)> {
    if !tree.label(base).leq(target) {
        return Err(Error::Precondition(format!("{} is not below {}", tree.label(base), target)));
    }
    let mut keep = tree.head_side(base);
    keep.push(tree.tail(base));
    let (mut sub, map) = tree.induced(&keep);
    let new_tail = map.vertices.binary_search(&tree.tail(base)).expect("tail kept");
    let new_base_edge = map.edges.iter().position(|&e| e == base / 2).expect("base edge kept");
    let new_base = sub.dart_from(new_base_edge, new_tail);
    let mut up = sub.darts_above(new_base);
    up.push(new_base);
    for f in up {
        let s = sub.label(f).join(target);
        sub.set_edge_label(f, s);
    }
    Ok((sub, map))
}

/// Origin of an element of a glued tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GluePart {
    First(usize),
    Second(usize),
    /// The single edge created by the identification.
    Joint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlueMap {
    pub vertices: Vec<GluePart>,
    pub edges: Vec<GluePart>,
}

/// Identifies dart `e1` of `t1` with dart `f2` of `t2`.
///
/// The tail of `e1` and the head of `f2` must be leaves and both darts must
/// carry the same label `(X,Y)`. The result keeps every other vertex and
/// edge, and joins `tail(f2)` to `head(e1)` by a new edge whose orientation
/// `tail(f2) -> head(e1)` is labelled `(X,Y)`.
pub fn glue(t1: &STree, e1: Dart, t2: &STree, f2: Dart) -> Result<(STree, GlueMap)> {
    if t1.label(e1) != t2.label(f2) || t1.label(e1 ^ 1) != t2.label(f2 ^ 1) {
        return Err(Error::LabelMismatch);
    }
    let drop1 = t1.tail(e1);
    let drop2 = t2.head(f2);
    if t1.degree(drop1) != 1 || t2.degree(drop2) != 1 {
        return Err(Error::Precondition("glued darts must end in leaves".into()));
    }
    let mut vertices = Vec::new();
    let mut id1 = vec![usize::MAX; t1.num_vertices()];
    let mut id2 = vec![usize::MAX; t2.num_vertices()];
    for v in (0..t1.num_vertices()).filter(|&v| v != drop1) {
        id1[v] = vertices.len();
        vertices.push(GluePart::First(v));
    }
    for v in (0..t2.num_vertices()).filter(|&v| v != drop2) {
        id2[v] = vertices.len();
        vertices.push(GluePart::Second(v));
    }
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    let mut edge_parts = Vec::new();
    for (i, &(u, v)) in t1.edges().iter().enumerate() {
        if i != e1 / 2 {
            edges.push((id1[u], id1[v]));
            labels.extend([t1.label(2 * i), t1.label(2 * i + 1)]);
            edge_parts.push(GluePart::First(i));
        }
    }
    for (i, &(u, v)) in t2.edges().iter().enumerate() {
        if i != f2 / 2 {
            edges.push((id2[u], id2[v]));
            labels.extend([t2.label(2 * i), t2.label(2 * i + 1)]);
            edge_parts.push(GluePart::Second(i));
        }
    }
    edges.push((id2[t2.tail(f2)], id1[t1.head(e1)]));
    labels.extend([t1.label(e1), t1.label(e1 ^ 1)]);
    edge_parts.push(GluePart::Joint);
    let tree = STree::from_dart_labels(vertices.len(), edges, labels)?;
    Ok((tree, GlueMap { vertices, edges: edge_parts }))
}
