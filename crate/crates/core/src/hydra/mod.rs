//! The stochastic Hydra game: tree state, round mechanics, the ordinal map
//! `T`, Hercules strategies and a pGCL encoding.

mod compile;
mod strategy;

pub use compile::{compile_to_pgcl, decode_counts, star_counts, CompileError};
pub use strategy::{canonical_heads, hercules_choose, random_table, HerculesStrategy, RANDOM_RANGE, RANDOM_TABLE_LEN};

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::Ordinal;
use crate::rational::{half_pow, Rational};

pub type NodeId = usize;

const NONE: u32 = u32::MAX;

/// Refuse to materialize trees larger than this many nodes.
pub const MAX_NODES: usize = 1 << 23;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HydraError {
    #[error("node {0} is not a head (a non-root leaf)")]
    NotAHead(NodeId),
    #[error("the chopped head has no grandparent, so the Hydra cannot evolve")]
    NoGrandparent,
    #[error("resulting tree would exceed {MAX_NODES} nodes")]
    TooLarge,
    #[error("malformed hydra text at offset {0}")]
    Text(usize),
    #[error("malformed hydra JSON: {0}")]
    Json(String),
    #[error("scripted strategy has no entry for round {0}")]
    ScriptExhausted(usize),
    #[error("the Hydra has no heads left")]
    Dead,
}

/// A finite rooted tree plus the regrowth capacity `n`. Removed nodes stay
/// in the arena as tombstones so ids are never reused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HydraState {
    parent: Vec<u32>,
    children: Vec<Vec<u32>>,
    alive: Vec<bool>,
    root: u32,
    pub n: BigUint,
}

/// Result of one round for one resolution of the evolution coins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundOutcome {
    pub survived: bool,
    pub prob: Rational,
    pub result: Option<HydraState>,
    /// Steps taken by the round in the pGCL encoding, when measured.
    pub steps: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct NodeJson {
    id: usize,
    parent: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct HydraJson {
    n: String,
    nodes: Vec<NodeJson>,
}

impl HydraState {
    /// A root with no heads and capacity 4.
    pub fn root_only() -> Self {
        HydraState {
            parent: vec![NONE],
            children: vec![Vec::new()],
            alive: vec![true],
            root: 0,
            n: BigUint::from(4u32),
        }
    }

    pub fn root(&self) -> NodeId {
        self.root as usize
    }

    pub fn add_child(&mut self, parent: NodeId) -> NodeId {
        let id = self.parent.len();
        self.parent.push(parent as u32);
        self.children.push(Vec::new());
        self.alive.push(true);
        self.children[parent].push(id as u32);
        id
    }

    pub fn is_alive(&self, v: NodeId) -> bool {
        v < self.alive.len() && self.alive[v]
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        let p = self.parent[v];
        (p != NONE).then_some(p as usize)
    }

    pub fn children(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.children[v].iter().map(|&c| c as usize)
    }

    pub fn child_count(&self, v: NodeId) -> usize {
        self.children[v].len()
    }

    pub fn node_count(&self) -> usize {
        self.alive.iter().filter(|a| **a).count()
    }

    /// No edges, hence no heads.
    pub fn is_empty(&self) -> bool {
        self.children[self.root()].is_empty()
    }

    pub fn depth(&self, mut v: NodeId) -> usize {
        let mut d = 0;
        while let Some(p) = self.parent(v) {
            v = p;
            d += 1;
        }
        d
    }

    pub fn height(&self) -> usize {
        self.heads().iter().map(|&h| self.depth(h)).max().unwrap_or(0)
    }

    /// Leaves other than the root, in depth-first pre-order.
    pub fn heads(&self) -> Vec<NodeId> {
        self.preorder().into_iter().filter(|&v| v != self.root() && self.children[v].is_empty()).collect()
    }

    pub fn is_head(&self, v: NodeId) -> bool {
        self.is_alive(v) && v != self.root() && self.children[v].is_empty()
    }

    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![self.root()];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children[v].iter().rev().map(|&c| c as usize));
        }
        out
    }

    fn remove_leaf(&mut self, v: NodeId) {
        let p = self.parent[v] as usize;
        self.children[p].retain(|&c| c as usize != v);
        self.alive[v] = false;
        self.parent[v] = NONE;
    }

    fn subtree_size(&self, v: NodeId) -> usize {
        let mut n = 0;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            n += 1;
            stack.extend(self.children[u].iter().map(|&c| c as usize));
        }
        n
    }

    fn copy_subtree(&mut self, src: NodeId, under: NodeId) {
        let mut stack = vec![(src, under)];
        while let Some((s, dst_parent)) = stack.pop() {
            let id = self.add_child(dst_parent);
            let kids: Vec<NodeId> = self.children(s).collect();
            for c in kids.into_iter().rev() {
                stack.push((c, id));
            }
        }
    }

    /// `T(v)`: 0 at leaves, natural sum of `ω^{T(child)}` otherwise.
    pub fn t_of(&self, v: NodeId) -> Ordinal {
        // Post-order evaluation without recursion.
        let order = {
            let mut out = Vec::new();
            let mut stack = vec![v];
            while let Some(u) = stack.pop() {
                out.push(u);
                stack.extend(self.children[u].iter().map(|&c| c as usize));
            }
            out
        };
        let mut value: BTreeMap<NodeId, Ordinal> = BTreeMap::new();
        for &u in order.iter().rev() {
            let mut counts: BTreeMap<Ordinal, BigUint> = BTreeMap::new();
            for c in self.children(u) {
                let t = value.remove(&c).expect("children evaluated first");
                *counts.entry(t).or_insert_with(BigUint::zero) += 1u32;
            }
            let o = Ordinal::from_terms(counts.into_iter().collect());
            value.insert(u, o);
        }
        value.remove(&v).expect("root evaluated")
    }

    pub fn t(&self) -> Ordinal {
        self.t_of(self.root())
    }

    /// Canonical form up to rooted-tree isomorphism.
    pub fn canonical(&self) -> String {
        fn go(h: &HydraState, v: NodeId) -> String {
            let mut parts: Vec<String> = h.children(v).map(|c| go(h, c)).collect();
            parts.sort();
            format!("({})", parts.concat())
        }
        go(self, self.root())
    }

    pub fn isomorphic(&self, other: &HydraState) -> bool {
        self.canonical() == other.canonical()
    }

    /// Nested parentheses in child order, e.g. `(()())`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut stack: Vec<(NodeId, bool)> = vec![(self.root(), false)];
        while let Some((v, closing)) = stack.pop() {
            if closing {
                out.push(')');
                continue;
            }
            out.push('(');
            stack.push((v, true));
            for c in self.children[v].iter().rev() {
                stack.push((*c as usize, false));
            }
        }
        out
    }

    /// Parses nested parentheses; the capacity starts at 4.
    pub fn parse(text: &str) -> Result<Self, HydraError> {
        let bytes: Vec<(usize, u8)> =
            text.bytes().enumerate().filter(|(_, b)| !b.is_ascii_whitespace()).collect();
        let mut h: Option<HydraState> = None;
        let mut stack: Vec<NodeId> = Vec::new();
        let mut done = false;
        for (off, b) in bytes {
            if done {
                return Err(HydraError::Text(off));
            }
            match b {
                b'(' => match (&mut h, stack.last()) {
                    (None, _) => {
                        h = Some(HydraState::root_only());
                        stack.push(0);
                    }
                    (Some(st), Some(&p)) => {
                        if st.parent.len() >= MAX_NODES {
                            return Err(HydraError::TooLarge);
                        }
                        let id = st.add_child(p);
                        stack.push(id);
                    }
                    (Some(_), None) => return Err(HydraError::Text(off)),
                },
                b')' => {
                    if stack.pop().is_none() {
                        return Err(HydraError::Text(off));
                    }
                    done = stack.is_empty();
                }
                _ => return Err(HydraError::Text(off)),
            }
        }
        if !done {
            return Err(HydraError::Text(text.len()));
        }
        h.ok_or(HydraError::Text(0))
    }

    /// Explicit-id JSON: `{"n": "4", "nodes": [{"id": 0, "parent": null}, ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let nodes = self
            .preorder()
            .into_iter()
            .map(|v| NodeJson { id: v, parent: self.parent(v) })
            .collect();
        serde_json::to_value(HydraJson { n: self.n.to_string(), nodes }).expect("plain struct serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, HydraError> {
        let j: HydraJson = serde_json::from_str(s).map_err(|e| HydraError::Json(e.to_string()))?;
        let n: BigUint = j.n.parse().map_err(|_| HydraError::Json(format!("bad capacity `{}`", j.n)))?;
        if n.is_zero() {
            return Err(HydraError::Json("capacity must be positive".into()));
        }
        let max_id = j.nodes.iter().map(|x| x.id).max().ok_or_else(|| HydraError::Json("no nodes".into()))?;
        if max_id >= MAX_NODES {
            return Err(HydraError::TooLarge);
        }
        let len = max_id + 1;
        let mut st = HydraState {
            parent: vec![NONE; len],
            children: vec![Vec::new(); len],
            alive: vec![false; len],
            root: NONE,
            n,
        };
        for x in &j.nodes {
            if st.alive[x.id] {
                return Err(HydraError::Json(format!("duplicate id {}", x.id)));
            }
            st.alive[x.id] = true;
        }
        for x in &j.nodes {
            match x.parent {
                None if st.root == NONE => st.root = x.id as u32,
                None => return Err(HydraError::Json("more than one root".into())),
                Some(p) if p < len && st.alive[p] => {
                    st.parent[x.id] = p as u32;
                    st.children[p].push(x.id as u32);
                }
                Some(p) => return Err(HydraError::Json(format!("unknown parent {p}"))),
            }
        }
        if st.root == NONE {
            return Err(HydraError::Json("no root".into()));
        }
        if st.subtree_size(st.root()) != j.nodes.len() {
            return Err(HydraError::Json("nodes are not connected to the root (or form a cycle)".into()));
        }
        Ok(st)
    }
}

/// Plays one round: Hercules chops `leaf`, the Hydra attempts `e`
/// evolutions. Returns the `e` death outcomes (in coin order) followed by
/// the surviving outcome.
pub fn play_round(h: &HydraState, leaf: NodeId, e: u32) -> Result<Vec<RoundOutcome>, HydraError> {
    if !h.is_head(leaf) {
        return Err(HydraError::NotAHead(leaf));
    }
    let parent = h.parent(leaf).expect("heads have parents");
    let grandparent = h.parent(parent);
    if grandparent.is_none() && e > 0 {
        return Err(HydraError::NoGrandparent);
    }
    let mut next = h.clone();
    next.remove_leaf(leaf);
    let Some(gp) = grandparent else {
        return Ok(vec![RoundOutcome { survived: true, prob: Rational::one(), result: Some(next), steps: None }]);
    };
    let mut out: Vec<RoundOutcome> = (1..=e)
        .map(|i| RoundOutcome { survived: false, prob: half_pow(i), result: None, steps: None })
        .collect();
    next.n = &h.n * BigUint::from(4u32).pow(e);
    let copies = (&next.n - BigUint::one()).to_usize().ok_or(HydraError::TooLarge)?;
    let size = next.subtree_size(parent);
    if copies.saturating_mul(size).saturating_add(next.parent.len()) > MAX_NODES {
        return Err(HydraError::TooLarge);
    }
    for _ in 0..copies {
        next.copy_subtree(parent, gp);
    }
    out.push(RoundOutcome { survived: true, prob: half_pow(e), result: Some(next), steps: None });
    Ok(out)
}

/// `T` of the surviving hydra for each evolution count `0..=e_max`.
pub fn successors_t(h: &HydraState, leaf: NodeId, e_max: u32) -> Result<Vec<Ordinal>, HydraError> {
    (0..=e_max)
        .map(|e| {
            let outs = play_round(h, leaf, e)?;
            let survivor = outs.into_iter().find(|o| o.survived).and_then(|o| o.result).expect("one survivor");
            Ok(survivor.t())
        })
        .collect()
}

/// Line hydra `root - mid - leaf`.
pub fn line_hydra() -> HydraState {
    HydraState::parse("((()))").expect("literal")
}

#[cfg(test)]
mod tests;
