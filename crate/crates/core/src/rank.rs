//! Rank oracles: non-negative, non-decreasing, submodular set functions
//! `r : 2^V -> N` inducing the order function `r(A) + r(B) - r(V)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::subset::{Subset, MAX_GROUND};

/// Rank values. Signed so that order and star-size arithmetic never wraps,
/// and so that a corrupted user table can be reported rather than rejected.
pub type Rank = i64;

/// Ground sets up to this size get a fully tabulated memo.
const TABLE_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankKind {
    /// `r(X) = |X|`.
    Cardinality,
    /// Cycle matroid of a graph; element `i` is edge `i` of the graph.
    Graphic(Graph),
    /// `r(X) = min(|X|, rank)`.
    Uniform { rank: usize },
    /// Column matroid of a matrix over GF(prime); element `i` is column `i`.
    Linear { matrix: Vec<Vec<u32>>, prime: u32 },
    /// Explicit values indexed by subset bit mask.
    Table(Vec<Rank>),
}

pub struct RankOracle {
    size: usize,
    kind: RankKind,
    table: OnceLock<Vec<Rank>>,
    memo: Mutex<HashMap<u64, Rank>>,
}

impl RankOracle {
    fn with_kind(size: usize, kind: RankKind) -> Result<RankOracle> {
        if size == 0 || size > MAX_GROUND {
            return Err(Error::GroundSetSize(size));
        }
        Ok(RankOracle { size, kind, table: OnceLock::new(), memo: Mutex::new(HashMap::new()) })
    }

    pub fn cardinality(size: usize) -> Result<RankOracle> {
        RankOracle::with_kind(size, RankKind::Cardinality)
    }

    pub fn graphic(g: &Graph) -> Result<RankOracle> {
        RankOracle::with_kind(g.num_edges(), RankKind::Graphic(g.clone()))
    }

    pub fn uniform(rank: usize, size: usize) -> Result<RankOracle> {
        RankOracle::with_kind(size, RankKind::Uniform { rank })
    }

    pub fn linear(matrix: Vec<Vec<u32>>, prime: u32) -> Result<RankOracle> {
        if !matches!(prime, 2 | 3 | 5 | 7) {
            return Err(Error::MalformedMatrix(format!("field size {prime} is not a prime <= 7")));
        }
        let cols = matrix.first().map(Vec::len).unwrap_or(0);
        if matrix.iter().any(|row| row.len() != cols) {
            return Err(Error::MalformedMatrix("rows have different lengths".into()));
        }
        if matrix.iter().flatten().any(|&x| x >= prime) {
            return Err(Error::MalformedMatrix(format!("entries must be reduced mod {prime}")));
        }
        RankOracle::with_kind(cols, RankKind::Linear { matrix, prime })
    }

    pub fn table(size: usize, values: Vec<Rank>) -> Result<RankOracle> {
        if size > 24 || values.len() != 1usize << size {
            return Err(Error::Precondition(format!("rank table for {size} elements needs 2^{size} entries")));
        }
        RankOracle::with_kind(size, RankKind::Table(values))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn kind(&self) -> &RankKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            RankKind::Cardinality => "cardinality",
            RankKind::Graphic(_) => "graphic-matroid",
            RankKind::Uniform { .. } => "uniform-matroid",
            RankKind::Linear { .. } => "linear-matroid",
            RankKind::Table(_) => "user-table",
        }
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.size)
    }

    /// `r(X)`, memoised.
    pub fn rank(&self, x: Subset) -> Rank {
        match &self.kind {
            RankKind::Cardinality => x.len() as Rank,
            RankKind::Uniform { rank } => x.len().min(*rank) as Rank,
            RankKind::Table(values) => values[x.bits() as usize],
            _ if self.size <= TABLE_LIMIT => {
                let table =
                    self.table.get_or_init(|| Subset::full(self.size).subsets().map(|s| self.compute(s)).collect());
                table[x.bits() as usize]
            }
            _ => {
                if let Some(&r) = self.memo.lock().expect("rank memo poisoned").get(&x.bits()) {
                    return r;
                }
                let r = self.compute(x);
                self.memo.lock().expect("rank memo poisoned").insert(x.bits(), r);
                r
            }
        }
    }

    fn compute(&self, x: Subset) -> Rank {
        match &self.kind {
            RankKind::Cardinality => x.len() as Rank,
            RankKind::Uniform { rank } => x.len().min(*rank) as Rank,
            RankKind::Table(values) => values[x.bits() as usize],
            RankKind::Graphic(g) => graphic_rank(g, x),
            RankKind::Linear { matrix, prime } => linear_rank(matrix, *prime, x),
        }
    }

    /// `|A,B|_r = r(A) + r(B) - r(V)`.
    pub fn order(&self, left: Subset, right: Subset) -> Rank {
        self.rank(left) + self.rank(right) - self.rank(self.full())
    }
}

impl Clone for RankOracle {
    fn clone(&self) -> Self {
        RankOracle::with_kind(self.size, self.kind.clone()).expect("size already validated")
    }
}

impl fmt::Debug for RankOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RankOracle").field("size", &self.size).field("kind", &self.kind_name()).finish()
    }
}

/// Number of touched vertices minus number of components of the subgraph
/// spanned by the edges in `x`.
fn graphic_rank(g: &Graph, x: Subset) -> Rank {
    let mut parent: Vec<usize> = (0..g.num_vertices()).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut rank = 0;
    for e in x.iter() {
        let (u, v) = g.edges()[e];
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            rank += 1;
        }
    }
    rank
}

fn inverse_mod(a: u32, p: u32) -> u32 {
    (1..p).find(|&b| a * b % p == 1).expect("nonzero element of a prime field")
}

/// Rank of the selected columns by Gaussian elimination over GF(p).
fn linear_rank(matrix: &[Vec<u32>], p: u32, x: Subset) -> Rank {
    let cols: Vec<usize> = x.iter().collect();
    let mut m: Vec<Vec<u32>> = matrix.iter().map(|row| cols.iter().map(|&c| row[c]).collect()).collect();
    let mut rank = 0;
    for col in 0..cols.len() {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, pivot);
        let inv = inverse_mod(m[rank][col], p);
        for v in m[rank].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col];
                let pivot = m[rank].clone();
                for (x, &y) in m[r].iter_mut().zip(&pivot) {
                    *x = (*x + p - factor * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank as Rank
}

/// A witnessed failure of one of the rank-function axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RankViolation {
    Negative { set: Vec<usize>, value: Rank },
    Monotonicity { smaller: Vec<usize>, larger: Vec<usize> },
    Submodularity { x: Vec<usize>, y: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub oracle: &'static str,
    pub exhaustive: bool,
    pub checked: usize,
    pub violations: Vec<RankViolation>,
}

impl RankReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// How `check_rank_oracle` explores the power set.
#[derive(Debug, Clone, Copy)]
pub enum CheckMode {
    /// Every subset, up to the given ground-set cap.
    Exhaustive { cap: usize },
    /// Random pairs of subsets drawn from a seeded generator.
    Sampled { samples: usize, seed: u64 },
}

impl Default for CheckMode {
    fn default() -> Self {
        CheckMode::Exhaustive { cap: 16 }
    }
}

/// Checks non-negativity, monotonicity and submodularity of `r`.
///
/// The exhaustive mode uses the local forms `r(X) <= r(X+e)` and
/// `r(X+a) + r(X+b) >= r(X+a+b) + r(X)`, which are equivalent to the global
/// axioms. At most one witness per axiom is kept.
pub fn check_rank_oracle(r: &RankOracle, mode: CheckMode) -> Result<RankReport> {
    let n = r.size();
    let full = r.full();
    let mut violations = Vec::new();
    let (mut neg, mut mono, mut sub) = (None, None, None);
    let mut checked = 0;
    match mode {
        CheckMode::Exhaustive { cap } => {
            if n > cap {
                return Err(Error::OverCap { size: n, cap });
            }
            for x in full.subsets() {
                checked += 1;
                let rx = r.rank(x);
                if rx < 0 && neg.is_none() {
                    neg = Some(RankViolation::Negative { set: x.to_vec(), value: rx });
                }
                let outside = full - x;
                for a in outside.iter() {
                    let xa = x | Subset::singleton(a);
                    let rxa = r.rank(xa);
                    if rxa < rx && mono.is_none() {
                        mono = Some(RankViolation::Monotonicity { smaller: x.to_vec(), larger: xa.to_vec() });
                    }
                    for b in outside.iter().filter(|&b| b > a) {
                        let xb = x | Subset::singleton(b);
                        if rxa + r.rank(xb) < r.rank(xa | xb) + rx && sub.is_none() {
                            sub = Some(RankViolation::Submodularity { x: xa.to_vec(), y: xb.to_vec() });
                        }
                    }
                }
            }
        }
        CheckMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                checked += 1;
                let x = Subset(rng.gen::<u64>()) & full;
                let y = Subset(rng.gen::<u64>()) & full;
                let (rx, ry) = (r.rank(x), r.rank(y));
                if rx < 0 && neg.is_none() {
                    neg = Some(RankViolation::Negative { set: x.to_vec(), value: rx });
                }
                let (xy, yx) = (x | y, x & y);
                if r.rank(xy) < rx && mono.is_none() {
                    mono = Some(RankViolation::Monotonicity { smaller: x.to_vec(), larger: xy.to_vec() });
                }
                if rx + ry < r.rank(xy) + r.rank(yx) && sub.is_none() {
                    sub = Some(RankViolation::Submodularity { x: x.to_vec(), y: y.to_vec() });
                }
            }
        }
    }
    violations.extend(neg);
    violations.extend(mono);
    violations.extend(sub);
    Ok(RankReport {
        oracle: r.kind_name(),
        exhaustive: matches!(mode, CheckMode::Exhaustive { .. }),
        checked,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn graphic_rank_of_triangle() {
        let r = RankOracle::graphic(&k3()).unwrap();
        assert_eq!(r.rank(Subset::full(3)), 2);
        assert_eq!(r.rank(Subset::from_elements([0, 1])), 2);
        assert_eq!(r.rank(Subset::singleton(2)), 1);
        assert_eq!(r.rank(Subset::EMPTY), 0);
    }

    #[test]
    fn uniform_and_linear() {
        let u = RankOracle::uniform(1, 3).unwrap();
        assert_eq!(u.rank(Subset::from_elements([0, 1])), 1);
        let l = RankOracle::linear(vec![vec![1, 0, 1], vec![0, 1, 1]], 2).unwrap();
        assert_eq!(l.rank(Subset::full(3)), 2);
        assert_eq!(l.rank(Subset::from_elements([0, 1])), 2);
        assert_eq!(l.rank(Subset::singleton(2)), 1);
        // Over GF(3) columns (1,1) and (2,2) are parallel.
        let l3 = RankOracle::linear(vec![vec![1, 2], vec![1, 2]], 3).unwrap();
        assert_eq!(l3.rank(Subset::full(2)), 1);
    }

    #[test]
    fn malformed_matrices_are_rejected() {
        assert!(RankOracle::linear(vec![vec![1, 0], vec![1]], 2).is_err());
        assert!(RankOracle::linear(vec![vec![2, 0]], 2).is_err());
        assert!(RankOracle::linear(vec![vec![1, 0]], 4).is_err());
    }

    #[test]
    fn checker_accepts_matroids() {
        for r in [
            RankOracle::cardinality(4).unwrap(),
            RankOracle::graphic(&k3()).unwrap(),
            RankOracle::uniform(2, 5).unwrap(),
            RankOracle::linear(vec![vec![1, 0, 1, 1], vec![0, 1, 1, 2]], 3).unwrap(),
        ] {
            let report = check_rank_oracle(&r, CheckMode::default()).unwrap();
            assert!(report.is_valid(), "{report:?}");
        }
    }

    #[test]
    fn checker_finds_monotonicity_violation() {
        // r({})=0, r({0})=2, r({1})=1, r({0,1})=1
        let r = RankOracle::table(2, vec![0, 2, 1, 1]).unwrap();
        let report = check_rank_oracle(&r, CheckMode::default()).unwrap();
        assert!(report.violations.iter().any(|v| matches!(v, RankViolation::Monotonicity { .. })));
    }

    #[test]
    fn checker_respects_cap() {
        let r = RankOracle::cardinality(20).unwrap();
        assert!(matches!(check_rank_oracle(&r, CheckMode::default()), Err(Error::OverCap { .. })));
        let sampled = check_rank_oracle(&r, CheckMode::Sampled { samples: 200, seed: 7 }).unwrap();
        assert!(sampled.is_valid());
        assert_eq!(sampled.checked, 200);
    }
}
