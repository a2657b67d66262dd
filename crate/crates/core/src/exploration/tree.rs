use serde_json::json;

use super::{ExploreError, Limits};
use crate::rational::{to_text, Rational};
use crate::scheduling::Scheduler;
use crate::semantics::{step, ExecState, StepKind};
use crate::syntax::Program;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub state: ExecState,
    pub parent: Option<usize>,
    /// Rule family of the step that produced this node.
    pub kind: Option<StepKind>,
    pub depth: usize,
    pub children: Vec<usize>,
}

/// Execution tree explored to a fixed depth. Node 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecTree {
    pub nodes: Vec<TreeNode>,
    pub depth_cap: usize,
}

impl ExecTree {
    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Non-terminal nodes at the depth cap.
    pub fn frontier(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].depth == self.depth_cap && !self.nodes[i].state.is_terminal())
            .collect()
    }

    pub fn terminal_leaves(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].state.is_terminal()).collect()
    }

    pub fn terminal_mass(&self) -> Rational {
        self.terminal_leaves().iter().map(|&i| self.nodes[i].state.prob.clone()).sum()
    }

    pub fn frontier_mass(&self) -> Rational {
        self.frontier().iter().map(|&i| self.nodes[i].state.prob.clone()).sum()
    }

    /// Node ids grouped by depth.
    pub fn levels(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.depth_cap + 1];
        for (i, n) in self.nodes.iter().enumerate() {
            out[n.depth].push(i);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<_> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                json!({
                    "id": i,
                    "depth": n.depth,
                    "terminal": n.state.is_terminal(),
                    "state": n.state.to_json(),
                })
            })
            .collect();
        let edges: Vec<_> = self
            .nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| {
                n.parent.map(|p| {
                    json!({
                        "from": p,
                        "to": i,
                        "kind": n.kind.map(|k| k.as_str()).unwrap_or("deterministic"),
                        "prob": to_text(&n.state.prob),
                    })
                })
            })
            .collect();
        json!({ "depth_cap": self.depth_cap, "nodes": nodes, "edges": edges })
    }

    /// Indented text rendering, one node per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            let n = &self.nodes[i];
            let label = n.kind.map(|k| k.as_str()).unwrap_or("root");
            let mark = if n.state.is_terminal() { " [terminal]" } else { "" };
            out.push_str(&format!(
                "{}#{i} {label} p={} h={} | {} @ {}{mark}\n",
                "  ".repeat(n.depth),
                to_text(&n.state.prob),
                n.state.history.to_text(),
                crate::syntax::print_compact(&n.state.program),
                n.state.valuation.to_text(),
            ));
            stack.extend(n.children.iter().rev());
        }
        out
    }
}

/// Breadth-first expansion of the execution tree from `(p, η₀, 1, ε)`.
pub fn build_tree(p: &Program, f: &mut dyn Scheduler, depth: usize, limits: Limits) -> Result<ExecTree, ExploreError> {
    build_tree_from(ExecState::initial(p), f, depth, limits)
}

pub fn build_tree_from(
    root: ExecState,
    f: &mut dyn Scheduler,
    depth: usize,
    limits: Limits,
) -> Result<ExecTree, ExploreError> {
    let mut nodes = vec![TreeNode { state: root, parent: None, kind: None, depth: 0, children: Vec::new() }];
    let mut level = vec![0usize];
    for d in 1..=depth {
        let mut next = Vec::new();
        for &i in &level {
            if nodes[i].state.is_terminal() {
                continue;
            }
            let out = step(&nodes[i].state, f)?;
            for (succ, kind) in out.successors {
                let id = nodes.len();
                nodes.push(TreeNode { state: succ, parent: Some(i), kind: Some(kind), depth: d, children: Vec::new() });
                nodes[i].children.push(id);
                next.push(id);
            }
            if nodes.len() > limits.node_cap {
                return Err(ExploreError::NodeCap { cap: limits.node_cap, depth: d });
            }
        }
        level = next;
    }
    Ok(ExecTree { nodes, depth_cap: depth })
}
