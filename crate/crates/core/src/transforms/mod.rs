//! Knievel-form recognition, the simulator-plus-halver transformation, and
//! emitters for the tree-reduction and ordinal programs.

mod emit;
mod knievel;

pub use emit::{
    emit_ordinal_program, emit_tree_reduction, inc_program, inc_program_capped, pair_code, unsoundness_program,
    unsoundness_program_capped,
};
pub use knievel::{control_graph, to_knievel, Control, ControlGraph, KnievelPolicy, HALTED};

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::ordinal::Ordinal;
use crate::syntax::Program;

/// Largest explicit tree the emitters will inline.
pub const MAX_EXPLICIT_NODES: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("probability expression `{0}` is not constant")]
    NonConstantProbability(String),
    #[error("frontier-encoding width exceeded: need {needed} slots, have {width}")]
    WidthExceeded { needed: usize, width: usize },
    #[error("control graph exceeds {0} locations")]
    TooManyLocations(usize),
    #[error("explicit tree has {0} nodes, more than the {MAX_EXPLICIT_NODES} that can be encoded")]
    TreeTooLarge(usize),
    #[error("invalid tree spec: {0}")]
    BadTree(String),
    #[error("invalid policy: {0}")]
    BadPolicy(String),
}

/// Named infinite trees with a closed-form membership test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeRule {
    /// Every sequence.
    Full,
    /// Sequences made only of zeros: a single infinite branch.
    AllZeros,
    /// Every sequence of length at most `d`.
    BoundedDepth(u32),
}

impl fmt::Display for TreeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeRule::Full => write!(f, "full"),
            TreeRule::AllZeros => write!(f, "all-zeros"),
            TreeRule::BoundedDepth(d) => write!(f, "bounded-depth({d})"),
        }
    }
}

impl TreeRule {
    pub fn parse(s: &str) -> Result<Self, TransformError> {
        match s.trim() {
            "full" => Ok(TreeRule::Full),
            "all-zeros" => Ok(TreeRule::AllZeros),
            other => other
                .strip_prefix("bounded-depth(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|d| d.trim().parse().ok())
                .map(TreeRule::BoundedDepth)
                .ok_or_else(|| TransformError::BadTree(format!("unknown rule `{other}`"))),
        }
    }

    pub fn contains(&self, w: &[u64]) -> bool {
        match self {
            TreeRule::Full => true,
            TreeRule::AllZeros => w.iter().all(|&x| x == 0),
            TreeRule::BoundedDepth(d) => w.len() <= *d as usize,
        }
    }
}

/// An ω-tree: a prefix-closed set of natural-number sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeSpec {
    Explicit(BTreeSet<Vec<u64>>),
    Rule(TreeRule),
}

impl TreeSpec {
    /// Validates prefix closure and presence of the root.
    pub fn explicit<I: IntoIterator<Item = Vec<u64>>>(nodes: I) -> Result<Self, TransformError> {
        let set: BTreeSet<Vec<u64>> = nodes.into_iter().collect();
        if !set.contains(&Vec::new()) {
            return Err(TransformError::BadTree("the root (empty sequence) is missing".into()));
        }
        for w in &set {
            if !w.is_empty() && !set.contains(&w[..w.len() - 1]) {
                return Err(TransformError::BadTree(format!("{w:?} is present but its parent is not")));
            }
        }
        Ok(TreeSpec::Explicit(set))
    }

    pub fn root_only() -> Self {
        TreeSpec::Explicit(BTreeSet::from([Vec::new()]))
    }

    pub fn contains(&self, w: &[u64]) -> bool {
        match self {
            TreeSpec::Explicit(set) => set.contains(w),
            TreeSpec::Rule(r) => r.contains(w),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            TreeSpec::Explicit(set) => serde_json::json!({ "explicit": set.iter().collect::<Vec<_>>() }),
            TreeSpec::Rule(r) => serde_json::json!({ "rule": r.to_string() }),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self, TransformError> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| TransformError::BadTree(e.to_string()))?;
        if let Some(rule) = v.get("rule") {
            let r = rule.as_str().ok_or_else(|| TransformError::BadTree("`rule` must be a string".into()))?;
            return TreeRule::parse(r).map(TreeSpec::Rule);
        }
        let nodes = v
            .get("explicit")
            .ok_or_else(|| TransformError::BadTree("expected `explicit` or `rule`".into()))?;
        let nodes: Vec<Vec<u64>> =
            serde_json::from_value(nodes.clone()).map_err(|e| TransformError::BadTree(e.to_string()))?;
        TreeSpec::explicit(nodes)
    }
}

/// True when every probabilistic choice is `skip <p> exit`.
pub fn is_knievel(p: &Program) -> bool {
    let mut ok = true;
    p.visit(&mut |q| {
        if let Program::ProbChoice(a, _, b) = q {
            ok &= matches!(a.as_ref(), Program::Skip) && matches!(b.as_ref(), Program::Exit);
        }
    });
    ok
}

/// Ordinal of the root: leaves map to 0, inner nodes to one more than the
/// supremum over their children.
pub fn ord_of_tree(set: &BTreeSet<Vec<u64>>) -> Ordinal {
    fn go(set: &BTreeSet<Vec<u64>>, w: &[u64]) -> Ordinal {
        if !set.contains(w) {
            return Ordinal::zero();
        }
        let children = set.iter().filter(|c| c.len() == w.len() + 1 && c.starts_with(w));
        let mut best: Option<Ordinal> = None;
        for c in children {
            let o = go(set, c);
            if best.as_ref().map_or(true, |b| o > *b) {
                best = Some(o);
            }
        }
        best.map_or_else(Ordinal::zero, |b| b.successor())
    }
    go(set, &[])
}

#[cfg(test)]
mod tests;
