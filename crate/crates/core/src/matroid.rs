//! Matroids given by a rank oracle, with JSON input.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphSpec};
use crate::rank::{check_rank_oracle, CheckMode, Rank, RankOracle};
use crate::separation::Universe;
use crate::subset::Subset;

/// JSON description of a matroid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MatroidSpec {
    /// Cycle matroid; element `i` is edge `i` of the graph.
    Graphic {
        graph: GraphSpec,
    },
    Uniform {
        rank: usize,
        size: usize,
    },
    /// Column matroid over GF(prime).
    Linear {
        matrix: Vec<Vec<u32>>,
        prime: u32,
    },
}

#[derive(Debug, Clone)]
pub struct Matroid {
    spec: MatroidSpec,
    rank: RankOracle,
    total: Rank,
}

impl Matroid {
    pub fn from_spec(spec: MatroidSpec) -> Result<Matroid> {
        let rank = match &spec {
            MatroidSpec::Graphic { graph } => RankOracle::graphic(&Graph::try_from(graph)?)?,
            MatroidSpec::Uniform { rank, size } => RankOracle::uniform(*rank, *size)?,
            MatroidSpec::Linear { matrix, prime } => RankOracle::linear(matrix.clone(), *prime)?,
        };
        if rank.size() <= 16 {
            let report = check_rank_oracle(&rank, CheckMode::default())?;
            if !report.is_valid() {
                return Err(Error::Precondition(format!(
                    "rank function is not a matroid rank: {:?}",
                    report.violations
                )));
            }
        }
        let total = rank.rank(rank.full());
        Ok(Matroid { spec, rank, total })
    }

    pub fn graphic(g: &Graph) -> Result<Matroid> {
        Matroid::from_spec(MatroidSpec::Graphic { graph: g.into() })
    }

    pub fn uniform(rank: usize, size: usize) -> Result<Matroid> {
        Matroid::from_spec(MatroidSpec::Uniform { rank, size })
    }

    pub fn linear(matrix: Vec<Vec<u32>>, prime: u32) -> Result<Matroid> {
        Matroid::from_spec(MatroidSpec::Linear { matrix, prime })
    }

    pub fn parse_json(text: &str) -> Result<Matroid> {
        let spec: MatroidSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Matroid::from_spec(spec)
    }

    pub fn spec(&self) -> &MatroidSpec {
        &self.spec
    }

    pub fn rank_oracle(&self) -> &RankOracle {
        &self.rank
    }

    pub fn size(&self) -> usize {
        self.rank.size()
    }

    /// `r(E)`.
    pub fn total_rank(&self) -> Rank {
        self.total
    }

    pub fn rank(&self, x: Subset) -> Rank {
        self.rank.rank(x)
    }

    /// Connectivity `λ(X) = r(X) + r(E∖X) - r(E)`.
    pub fn connectivity(&self, x: Subset) -> Rank {
        let full = self.rank.full();
        self.rank(x) + self.rank(full - x) - self.total
    }

    /// The universe of bipartitions of the ground set.
    pub fn universe(&self) -> Universe {
        Universe::bipartitions(self.rank.clone())
    }
}
