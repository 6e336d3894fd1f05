pub mod acceptance;
pub mod corpus;
pub mod decomposition;
pub mod error;
pub mod family;
pub mod flow;
pub mod graph;
pub mod matroid;
pub mod pipeline;
pub mod rank;
pub mod refine;
pub mod separation;
pub mod stree;
pub mod subset;
pub mod verify;
pub mod width;

pub use error::{Error, Result};
pub use graph::Graph;
pub use rank::{Rank, RankOracle};
pub use separation::{Separation, Universe};
pub use subset::Subset;
