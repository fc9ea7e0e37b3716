//! Quartet-tree clustering of a distance matrix into an unrooted ternary
//! tree with `n` leaves and `n - 2` internal nodes.

mod newick;
mod score;
mod search;
mod tree;

use thiserror::Error;

pub use score::{tree_score, QuartetCosts};
pub use search::{
    exhaustive_best, hill_climb, hill_climb_sequential, RestartOutcome, SearchConfig,
    SearchOutcome, EXHAUSTIVE_MAX_LEAVES,
};
pub use tree::{QuartetTopology, UnrootedTernaryTree};

#[derive(Debug, Error)]
pub enum QuartetError {
    #[error("quartet trees need at least 4 leaves, got {0}")]
    TooFewLeaves(usize),
    #[error("{0} leaves is more than the quartet scorer supports")]
    TooManyLeaves(usize),
    #[error("exhaustive search supports 4 to {EXHAUSTIVE_MAX_LEAVES} leaves, got {0}")]
    ExhaustiveSize(usize),
    #[error("distance ({a}, {b}) is not finite")]
    NonFinite { a: String, b: String },
    #[error("tree leaves and matrix labels differ")]
    LabelMismatch,
    #[error("no leaf labeled {0:?}")]
    UnknownLeaf(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("newick parse error at byte {pos}: {message}")]
    Newick { pos: usize, message: String },
    #[error("invalid search settings: {0}")]
    InvalidSearch(String),
}
