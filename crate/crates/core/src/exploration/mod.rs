//! Bounded execution trees, runtime series, the AST semi-decider and
//! scheduler-free state graphs.

mod graph;
mod semicheck;
mod series;
mod tree;

pub use graph::{collapse_from, collapse_to_state_graph, EdgeLabel, GraphEdge, GraphError, GraphNode, NodeKind, StateGraph};
pub use semicheck::{ast_search, ast_semicheck, reachable_queries, SemicheckConfig};
pub use series::{
    exp_reach_runtime_bounds, exp_reach_runtime_bounds_from, exp_runtime_bounds,
    exp_runtime_bounds_from, is_exit_pending, termination_prob_upto, RuntimeBounds, SeriesWalker,
};
pub use tree::{build_tree, build_tree_from, ExecTree, TreeNode};

use thiserror::Error;

use crate::scheduling::EnumerationTooLarge;
use crate::semantics::StepError;

/// Default bound on the number of execution states held at once.
pub const DEFAULT_NODE_CAP: usize = 2_000_000;

/// Resource limits for exploration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub node_cap: usize,
}

impl Limits {
    pub fn new(node_cap: usize) -> Self {
        Limits { node_cap: node_cap.max(1) }
    }

    /// Honors `PASTLAB_NODE_CAP` when it holds a positive integer.
    pub fn from_env() -> Self {
        let cap = std::env::var("PASTLAB_NODE_CAP")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .unwrap_or(DEFAULT_NODE_CAP);
        Limits::new(cap)
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits::from_env()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExploreError {
    #[error("node cap of {cap} exceeded at depth {depth}")]
    NodeCap { cap: usize, depth: usize },
    #[error(transparent)]
    Step(#[from] StepError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationTooLarge),
    #[error("state space not closed within bound of {bound} states")]
    NotClosed { bound: usize },
    #[error("delta must lie strictly between 0 and 1")]
    BadDelta,
    #[error("could not start worker pool: {0}")]
    Pool(String),
}
