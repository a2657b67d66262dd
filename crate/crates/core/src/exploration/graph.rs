use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ExploreError;
use crate::rational::{from_text, to_text, Rational};
use crate::semantics::{transitions, Label, ProgramState};
use crate::syntax::Program;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EdgeLabel {
    Det,
    NondetLeft,
    NondetRight,
    ProbLeft(Rational),
    ProbRight(Rational),
}

impl EdgeLabel {
    pub fn code(&self) -> &'static str {
        match self {
            EdgeLabel::Det => "det",
            EdgeLabel::NondetLeft => "nd-left",
            EdgeLabel::NondetRight => "nd-right",
            EdgeLabel::ProbLeft(_) => "prob-left",
            EdgeLabel::ProbRight(_) => "prob-right",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub label: EdgeLabel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphNode {
    pub key: String,
    pub terminal: bool,
    /// Present when the graph was collapsed from a program.
    pub state: Option<ProgramState>,
}

/// Statement shape of a node, derived from its outgoing edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Terminal,
    Det(usize),
    Nondet(usize, usize),
    /// Probability of the left successor, left, right.
    Prob(Rational, usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid graph JSON: {0}")]
    Json(String),
    #[error("duplicate node key `{0}`")]
    DuplicateKey(String),
    #[error("edge refers to unknown node `{0}`")]
    UnknownNode(String),
    #[error("node `{0}` has outgoing edges inconsistent with a single statement kind")]
    BadShape(String),
    #[error("invalid probability on an edge from `{0}`")]
    BadProbability(String),
}

/// Finite graph of program states with labelled transitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
    pub initial: usize,
    kinds: Vec<NodeKind>,
    index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct NodeJson {
    key: String,
    terminal: bool,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    from: String,
    to: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    initial: String,
    nodes: Vec<NodeJson>,
    edges: Vec<EdgeJson>,
}

impl StateGraph {
    /// Builds a graph from explicit nodes and edges, validating shapes.
    pub fn new(nodes: Vec<GraphNode>, edges: Vec<GraphEdge>, initial: usize) -> Result<Self, GraphError> {
        let mut index = HashMap::new();
        for (i, n) in nodes.iter().enumerate() {
            if index.insert(n.key.clone(), i).is_some() {
                return Err(GraphError::DuplicateKey(n.key.clone()));
            }
        }
        let mut out: Vec<Vec<&GraphEdge>> = vec![Vec::new(); nodes.len()];
        for e in &edges {
            if e.from >= nodes.len() || e.to >= nodes.len() {
                return Err(GraphError::UnknownNode(format!("#{}", e.from.max(e.to))));
            }
            out[e.from].push(e);
        }
        let mut kinds = Vec::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            let bad = || GraphError::BadShape(n.key.clone());
            let es = &out[i];
            let find = |code: &str| es.iter().find(|e| e.label.code() == code);
            let kind = match es.len() {
                0 if n.terminal => NodeKind::Terminal,
                1 if !n.terminal && es[0].label == EdgeLabel::Det => NodeKind::Det(es[0].to),
                2 if !n.terminal => match (find("nd-left"), find("nd-right"), find("prob-left"), find("prob-right")) {
                    (Some(l), Some(r), None, None) => NodeKind::Nondet(l.to, r.to),
                    (None, None, Some(l), Some(r)) => {
                        let (EdgeLabel::ProbLeft(p), EdgeLabel::ProbRight(q)) = (&l.label, &r.label) else {
                            return Err(bad());
                        };
                        if p + q != Rational::one() || *p <= Rational::zero() || *q <= Rational::zero() {
                            return Err(GraphError::BadProbability(n.key.clone()));
                        }
                        NodeKind::Prob(p.clone(), l.to, r.to)
                    }
                    _ => return Err(bad()),
                },
                _ => return Err(bad()),
            };
            kinds.push(kind);
        }
        if initial >= nodes.len() {
            return Err(GraphError::UnknownNode(format!("#{initial}")));
        }
        Ok(StateGraph { nodes, edges, initial, kinds, index })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn kind(&self, n: usize) -> &NodeKind {
        &self.kinds[n]
    }

    pub fn key(&self, n: usize) -> &str {
        &self.nodes[n].key
    }

    pub fn node(&self, key: &str) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn is_terminal(&self, n: usize) -> bool {
        self.nodes[n].terminal
    }

    pub fn successors(&self, n: usize) -> Vec<usize> {
        match self.kinds[n] {
            NodeKind::Terminal => Vec::new(),
            NodeKind::Det(a) => vec![a],
            NodeKind::Nondet(a, b) | NodeKind::Prob(_, a, b) => vec![a, b],
        }
    }

    /// Reachability mask from `from`, including `from` itself.
    pub fn reach(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(n) = queue.pop_front() {
            for m in self.successors(n) {
                if !seen[m] {
                    seen[m] = true;
                    queue.push_back(m);
                }
            }
        }
        seen
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = GraphJson {
            initial: self.nodes[self.initial].key.clone(),
            nodes: self.nodes.iter().map(|n| NodeJson { key: n.key.clone(), terminal: n.terminal }).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    from: self.nodes[e.from].key.clone(),
                    to: self.nodes[e.to].key.clone(),
                    kind: e.label.code().to_string(),
                    p: match &e.label {
                        EdgeLabel::ProbLeft(p) | EdgeLabel::ProbRight(p) => Some(to_text(p)),
                        _ => None,
                    },
                })
                .collect(),
        };
        serde_json::to_value(j).expect("plain struct serializes")
    }

    /// Parses the JSON format. Keys that are valid program states are
    /// decoded; other keys are kept as opaque labels.
    pub fn from_json_str(s: &str) -> Result<Self, GraphError> {
        let j: GraphJson = serde_json::from_str(s).map_err(|e| GraphError::Json(e.to_string()))?;
        let nodes: Vec<GraphNode> = j
            .nodes
            .into_iter()
            .map(|n| GraphNode { state: ProgramState::from_key(&n.key).ok(), key: n.key, terminal: n.terminal })
            .collect();
        let mut index = BTreeMap::new();
        for (i, n) in nodes.iter().enumerate() {
            index.insert(n.key.clone(), i);
        }
        let lookup = |k: &str| index.get(k).copied().ok_or_else(|| GraphError::UnknownNode(k.to_string()));
        let mut edges = Vec::new();
        for e in j.edges {
            let (from, to) = (lookup(&e.from)?, lookup(&e.to)?);
            let prob = || -> Result<Rational, GraphError> {
                let t = e.p.as_deref().ok_or_else(|| GraphError::BadProbability(e.from.clone()))?;
                from_text(t).map_err(|_| GraphError::BadProbability(e.from.clone()))
            };
            let label = match e.kind.as_str() {
                "det" => EdgeLabel::Det,
                "nd-left" => EdgeLabel::NondetLeft,
                "nd-right" => EdgeLabel::NondetRight,
                "prob-left" => EdgeLabel::ProbLeft(prob()?),
                "prob-right" => EdgeLabel::ProbRight(prob()?),
                other => return Err(GraphError::Json(format!("unknown edge kind `{other}`"))),
            };
            edges.push(GraphEdge { from, to, label });
        }
        let initial = lookup(&j.initial)?;
        StateGraph::new(nodes, edges, initial)
    }
}

/// Explores every scheduler branch and both probabilistic arms from the
/// initial state, merging equal program states. Refuses when more than
/// `bound` distinct states are found.
pub fn collapse_to_state_graph(p: &Program, bound: usize) -> Result<StateGraph, ExploreError> {
    collapse_from(ProgramState::initial(p), bound)
}

pub fn collapse_from(start: ProgramState, bound: usize) -> Result<StateGraph, ExploreError> {
    let mut ids: HashMap<ProgramState, usize> = HashMap::new();
    let mut states = vec![start.clone()];
    ids.insert(start, 0);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let s = states[i].clone();
        for t in transitions(&s) {
            let label = match t.label {
                Label::Det | Label::ForcedLeft | Label::ForcedRight => EdgeLabel::Det,
                Label::ProbLeft(p) => EdgeLabel::ProbLeft(p),
                Label::ProbRight(p) => EdgeLabel::ProbRight(p),
                Label::NondetLeft(_) => EdgeLabel::NondetLeft,
                Label::NondetRight(_) => EdgeLabel::NondetRight,
            };
            let j = match ids.get(&t.target) {
                Some(&j) => j,
                None => {
                    if states.len() >= bound {
                        return Err(ExploreError::NotClosed { bound });
                    }
                    let j = states.len();
                    ids.insert(t.target.clone(), j);
                    states.push(t.target);
                    queue.push_back(j);
                    j
                }
            };
            edges.push(GraphEdge { from: i, to: j, label });
        }
    }
    let nodes = states
        .into_iter()
        .map(|s| GraphNode { key: s.key(), terminal: s.is_terminal(), state: Some(s) })
        .collect();
    Ok(StateGraph::new(nodes, edges, 0).expect("collapsed graphs are well formed"))
}
