//! Checkers for ranking-supermartingale maps and ordinal rank
//! certificates over finite state graphs.

mod solver;

pub use solver::{trapped_nodes, worst_case_exit_time};

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exploration::{NodeKind, StateGraph};
use crate::ordinal::Ordinal;
use crate::rational::{from_text, to_text, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("certificate has no value for node `{0}`")]
    MissingNode(String),
    #[error("epsilon must be positive")]
    BadEpsilon,
    #[error("invalid certificate JSON: {0}")]
    Json(String),
    #[error("region is not exit-bounded: some scheduler can stay forever from `{0}`")]
    NotExitBounded(String),
    #[error("worst-case exit time {found} exceeds the supplied bound {bound}")]
    BoundExceeded { found: String, bound: String },
}

/// `h : nodes → ℚ≥0` together with the decrease `ε`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RsmCert {
    pub h: BTreeMap<String, Rational>,
    pub epsilon: Rational,
}

/// Rank map `g` and per-node RSM certificates `k`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RuleCert {
    pub g: BTreeMap<String, Ordinal>,
    pub k: BTreeMap<String, RsmCert>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub node: String,
    pub condition: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl Verdict {
    fn from(violations: Vec<Violation>) -> Self {
        Verdict { ok: violations.is_empty(), violations }
    }
}

#[derive(Serialize, Deserialize)]
struct RsmJson {
    epsilon: String,
    h: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct RuleJson {
    g: BTreeMap<String, String>,
    k: BTreeMap<String, RsmJson>,
}

fn rsm_from_json(j: RsmJson) -> Result<RsmCert, CertError> {
    let rat = |s: &str| from_text(s).map_err(|e| CertError::Json(e.to_string()));
    let mut h = BTreeMap::new();
    for (k, v) in j.h {
        h.insert(k, rat(&v)?);
    }
    Ok(RsmCert { h, epsilon: rat(&j.epsilon)? })
}

fn rsm_to_json(c: &RsmCert) -> RsmJson {
    RsmJson { epsilon: to_text(&c.epsilon), h: c.h.iter().map(|(k, v)| (k.clone(), to_text(v))).collect() }
}

impl RsmCert {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(rsm_to_json(self)).expect("plain struct serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, CertError> {
        let j: RsmJson = serde_json::from_str(s).map_err(|e| CertError::Json(e.to_string()))?;
        rsm_from_json(j)
    }

    fn value(&self, key: &str) -> Option<&Rational> {
        self.h.get(key)
    }
}

impl RuleCert {
    pub fn to_json(&self) -> serde_json::Value {
        let j = RuleJson {
            g: self.g.iter().map(|(k, v)| (k.clone(), v.to_text())).collect(),
            k: self.k.iter().map(|(k, v)| (k.clone(), rsm_to_json(v))).collect(),
        };
        serde_json::to_value(j).expect("plain struct serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, CertError> {
        let j: RuleJson = serde_json::from_str(s).map_err(|e| CertError::Json(e.to_string()))?;
        let mut g = BTreeMap::new();
        for (k, v) in j.g {
            g.insert(k, Ordinal::parse(&v).map_err(|e| CertError::Json(e.to_string()))?);
        }
        let mut k = BTreeMap::new();
        for (key, v) in j.k {
            k.insert(key, rsm_from_json(v)?);
        }
        Ok(RuleCert { g, k })
    }
}

fn violation(node: &str, condition: &str, lhs: &Rational, rhs: &Rational) -> Violation {
    Violation { node: node.to_string(), condition: condition.to_string(), lhs: to_text(lhs), rhs: to_text(rhs) }
}

/// Checks the three decrease conditions at every node outside `target`.
/// Values absent from the certificate read as 0 when `lenient`, otherwise
/// they are an error.
fn decrease_violations(
    g: &StateGraph,
    cert: &RsmCert,
    nodes: impl Iterator<Item = usize>,
    target: &[bool],
    lenient: bool,
    prefix: &str,
) -> Result<Vec<Violation>, CertError> {
    let get = |s: usize| -> Result<Rational, CertError> {
        match cert.value(g.key(s)) {
            Some(v) => Ok(v.clone()),
            None if lenient => Ok(Rational::zero()),
            None => Err(CertError::MissingNode(g.key(s).to_string())),
        }
    };
    let eps = &cert.epsilon;
    let mut out = Vec::new();
    for s in nodes {
        if target[s] {
            continue;
        }
        let hs = get(s)?;
        let (cond, lhs) = match g.kind(s) {
            NodeKind::Terminal => continue,
            NodeKind::Det(a) => ("det", get(*a)? + eps),
            NodeKind::Nondet(a, b) => ("nondet", get(*a)?.max(get(*b)?) + eps),
            NodeKind::Prob(p, a, b) => ("prob", p * get(*a)? + (Rational::from_integer(1.into()) - p) * get(*b)? + eps),
        };
        if lhs > hs {
            out.push(violation(g.key(s), &format!("{prefix}{cond}"), &lhs, &hs));
        }
    }
    Ok(out)
}

/// Checks an RSM-map whose zero set is the terminal nodes: non-negativity,
/// zero on terminals and the decrease condition matching each node kind.
pub fn check_rsm(g: &StateGraph, cert: &RsmCert) -> Result<Verdict, CertError> {
    let target: Vec<bool> = (0..g.len()).map(|s| g.is_terminal(s)).collect();
    check_rsm_to(g, cert, &target)
}

/// Variant with an explicit target set: decrease conditions are required
/// off the target, and `h` must vanish on terminal nodes.
pub fn check_rsm_to(g: &StateGraph, cert: &RsmCert, target: &[bool]) -> Result<Verdict, CertError> {
    if !cert.epsilon.is_positive() {
        return Err(CertError::BadEpsilon);
    }
    let mut out = Vec::new();
    for s in 0..g.len() {
        let hs = cert.value(g.key(s)).ok_or_else(|| CertError::MissingNode(g.key(s).to_string()))?;
        if hs.is_negative() {
            out.push(violation(g.key(s), "nonnegative", hs, &Rational::zero()));
        }
        if g.is_terminal(s) && !hs.is_zero() {
            out.push(violation(g.key(s), "terminal-zero", hs, &Rational::zero()));
        }
    }
    out.extend(decrease_violations(g, cert, 0..g.len(), target, false, "")?);
    Ok(Verdict::from(out))
}

/// Upper bound `h(σ)/ε` on the expected time to reach the zero set.
pub fn rsm_bound(cert: &RsmCert, key: &str) -> Result<Rational, CertError> {
    if !cert.epsilon.is_positive() {
        return Err(CertError::BadEpsilon);
    }
    let h = cert.value(key).ok_or_else(|| CertError::MissingNode(key.to_string()))?;
    Ok(h / &cert.epsilon)
}

/// Nodes reachable from `s` with strictly smaller rank.
pub fn lower_set(g: &StateGraph, rank: &BTreeMap<String, Ordinal>, s: usize) -> Result<Vec<usize>, CertError> {
    let get = |t: usize| rank.get(g.key(t)).ok_or_else(|| CertError::MissingNode(g.key(t).to_string()));
    let gs = get(s)?;
    let reach = g.reach(s);
    let mut out = Vec::new();
    for t in 0..g.len() {
        if reach[t] && get(t)? < gs {
            out.push(t);
        }
    }
    Ok(out)
}

/// Checks rank/certificate pairs: `g` vanishes exactly on terminals, and
/// each `k(σ)` is an RSM-map on `Reach(σ)` whose zero set is exactly
/// `Lower_σ` together with every node not reachable from `σ`.
pub fn check_proof_rule(g: &StateGraph, cert: &RuleCert) -> Result<Verdict, CertError> {
    let mut out = Vec::new();
    for s in 0..g.len() {
        let key = g.key(s);
        let rank = cert.g.get(key).ok_or_else(|| CertError::MissingNode(key.to_string()))?;
        if rank.is_zero() != g.is_terminal(s) {
            out.push(Violation {
                node: key.to_string(),
                condition: "rank-zero-iff-terminal".to_string(),
                lhs: rank.to_text(),
                rhs: if g.is_terminal(s) { "terminal".into() } else { "non-terminal".into() },
            });
        }
    }
    for s in 0..g.len() {
        if g.is_terminal(s) {
            continue;
        }
        let key = g.key(s);
        let k = cert.k.get(key).ok_or_else(|| CertError::MissingNode(format!("k[{key}]")))?;
        if !k.epsilon.is_positive() {
            return Err(CertError::BadEpsilon);
        }
        let reach = g.reach(s);
        let mut zero = vec![false; g.len()];
        for t in lower_set(g, &cert.g, s)? {
            zero[t] = true;
        }
        for t in 0..g.len() {
            if !reach[t] {
                zero[t] = true;
            }
        }
        for t in 0..g.len() {
            let h = k.value(g.key(t)).cloned().unwrap_or_else(Rational::zero);
            if h.is_negative() {
                out.push(violation(key, &format!("k[{}]: nonnegative", g.key(t)), &h, &Rational::zero()));
            }
            if h.is_zero() != zero[t] {
                out.push(Violation {
                    node: key.to_string(),
                    condition: format!("k[{}]: zero-set", g.key(t)),
                    lhs: to_text(&h),
                    rhs: if zero[t] { "must be 0".into() } else { "must be positive".into() },
                });
            }
        }
        let nodes = (0..g.len()).filter(|&t| reach[t]);
        out.extend(decrease_violations(g, k, nodes, &zero, true, &format!("k[{key}] "))?);
    }
    Ok(Verdict::from(out))
}

/// RSM-map for leaving `region`: `h` is the exact worst-case expected exit
/// time inside the region and 0 outside, with `ε = 1`. Fails when some
/// scheduler can stay in the region forever, or when the exit time
/// exceeds `bound`.
pub fn in_loop_rsm_from_bound(g: &StateGraph, region: &[bool], bound: &Rational) -> Result<RsmCert, CertError> {
    let val = worst_case_exit_time(g, region)?;
    let worst = val.iter().max().cloned().unwrap_or_else(Rational::zero);
    if worst > *bound {
        return Err(CertError::BoundExceeded { found: to_text(&worst), bound: to_text(bound) });
    }
    let h = (0..g.len()).map(|s| (g.key(s).to_string(), val[s].clone())).collect();
    Ok(RsmCert { h, epsilon: Rational::from_integer(1.into()) })
}

#[cfg(test)]
mod tests;
