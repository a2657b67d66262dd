use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{from_text, to_text, Rational};
use crate::syntax::{parse, print_compact, Program};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Ln,
    Rn,
    Lp,
    Rp,
}

impl Direction {
    pub fn code(self) -> &'static str {
        match self {
            Direction::Ln => "Ln",
            Direction::Rn => "Rn",
            Direction::Lp => "Lp",
            Direction::Rp => "Rp",
        }
    }

    pub fn from_code(s: &str) -> Option<Self> {
        Some(match s {
            "Ln" => Direction::Ln,
            "Rn" => Direction::Rn,
            "Lp" => Direction::Lp,
            "Rp" => Direction::Rp,
            _ => return None,
        })
    }

    pub fn is_nondet(self) -> bool {
        matches!(self, Direction::Ln | Direction::Rn)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed history `{0}`")]
pub struct HistoryParseError(pub String);

/// Decision history word, shared between states until it is extended.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct History(Arc<Vec<Direction>>);

impl History {
    pub fn new() -> Self {
        History::default()
    }

    pub fn from_vec(v: Vec<Direction>) -> Self {
        History(Arc::new(v))
    }

    pub fn as_slice(&self) -> &[Direction] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn extended(&self, d: Direction) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(d);
        History(Arc::new(v))
    }

    pub fn to_text(&self) -> String {
        encode_history(&self.0)
    }

    pub fn parse(s: &str) -> Result<Self, HistoryParseError> {
        decode_history(s).map(History::from_vec)
    }
}

pub fn encode_history(h: &[Direction]) -> String {
    h.iter().map(|d| d.code()).collect()
}

pub fn decode_history(s: &str) -> Result<Vec<Direction>, HistoryParseError> {
    let bytes = s.as_bytes();
    if bytes.len() % 2 != 0 || !s.is_ascii() {
        return Err(HistoryParseError(s.to_string()));
    }
    bytes
        .chunks(2)
        .map(|c| {
            std::str::from_utf8(c)
                .ok()
                .and_then(Direction::from_code)
                .ok_or_else(|| HistoryParseError(s.to_string()))
        })
        .collect()
}

/// Variable valuation; absent variables read as 0 and zero entries are
/// never stored, so equal valuations are structurally equal.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation(Arc<BTreeMap<String, Rational>>);

impl Valuation {
    pub fn new() -> Self {
        Valuation::default()
    }

    pub fn get(&self, var: &str) -> Rational {
        self.0.get(var).cloned().unwrap_or_else(Rational::zero)
    }

    /// Persistent update; `self` is unchanged.
    pub fn set(&self, var: &str, value: Rational) -> Self {
        let mut m = (*self.0).clone();
        if value.is_zero() {
            m.remove(var);
        } else {
            m.insert(var.to_string(), value);
        }
        Valuation(Arc::new(m))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rational)> {
        self.0.iter()
    }

    pub fn from_pairs<I: IntoIterator<Item = (String, Rational)>>(pairs: I) -> Self {
        let m = pairs.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Valuation(Arc::new(m))
    }

    /// `x=1, y=1/2`; empty valuation renders as the empty string.
    pub fn to_text(&self) -> String {
        self.0
            .iter()
            .map(|(k, v)| format!("{k}={}", to_text(v)))
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn to_json_map(&self) -> BTreeMap<String, String> {
        self.0.iter().map(|(k, v)| (k.clone(), to_text(v))).collect()
    }

    pub fn from_json_map(m: &BTreeMap<String, String>) -> Result<Self, StateFormatError> {
        let mut pairs = Vec::new();
        for (k, v) in m {
            let r = from_text(v).map_err(|e| StateFormatError::Rational(e.to_string()))?;
            pairs.push((k.clone(), r));
        }
        Ok(Valuation::from_pairs(pairs))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateFormatError {
    #[error("invalid program text: {0}")]
    Program(String),
    #[error("invalid rational: {0}")]
    Rational(String),
    #[error("{0}")]
    History(#[from] HistoryParseError),
    #[error("probability must lie in (0, 1], got {0}")]
    Probability(String),
    #[error("malformed state key `{0}`")]
    Key(String),
    #[error("invalid JSON: {0}")]
    Json(String),
}

/// A program together with a valuation; histories and probabilities are
/// deliberately absent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProgramState {
    pub program: Arc<Program>,
    pub valuation: Valuation,
}

impl ProgramState {
    pub fn new(program: Program, valuation: Valuation) -> Self {
        ProgramState { program: Arc::new(program), valuation }
    }

    pub fn initial(program: &Program) -> Self {
        ProgramState::new(program.clone(), Valuation::new())
    }

    pub fn is_terminal(&self) -> bool {
        self.program.is_empty()
    }

    /// Canonical serialized form used as a node key: `program @ valuation`.
    pub fn key(&self) -> String {
        format!("{} @ {}", print_compact(&self.program), self.valuation.to_text())
    }

    pub fn from_key(key: &str) -> Result<Self, StateFormatError> {
        let (prog, vals) = key.rsplit_once(" @").ok_or_else(|| StateFormatError::Key(key.to_string()))?;
        let program = parse(prog).map_err(|e| StateFormatError::Program(e.to_string()))?;
        let mut pairs = Vec::new();
        for part in vals.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| StateFormatError::Key(key.to_string()))?;
            let r = from_text(v).map_err(|e| StateFormatError::Rational(e.to_string()))?;
            pairs.push((k.trim().to_string(), r));
        }
        Ok(ProgramState::new(program, Valuation::from_pairs(pairs)))
    }
}

/// Execution state: program, valuation, path probability and history.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExecState {
    pub program: Arc<Program>,
    pub valuation: Valuation,
    pub prob: Rational,
    pub history: History,
}

#[derive(Serialize, Deserialize)]
struct ExecStateJson {
    program: String,
    valuation: BTreeMap<String, String>,
    prob: String,
    history: String,
}

impl ExecState {
    /// `(p, η₀, 1, ε)`.
    pub fn initial(program: &Program) -> Self {
        ExecState::from_program_state(&ProgramState::initial(program))
    }

    pub fn from_program_state(s: &ProgramState) -> Self {
        ExecState {
            program: Arc::clone(&s.program),
            valuation: s.valuation.clone(),
            prob: Rational::one(),
            history: History::new(),
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.program.is_empty()
    }

    pub fn program_state(&self) -> ProgramState {
        ProgramState { program: Arc::clone(&self.program), valuation: self.valuation.clone() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = ExecStateJson {
            program: print_compact(&self.program),
            valuation: self.valuation.to_json_map(),
            prob: to_text(&self.prob),
            history: self.history.to_text(),
        };
        serde_json::to_value(j).expect("plain struct serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, StateFormatError> {
        let j: ExecStateJson =
            serde_json::from_value(v.clone()).map_err(|e| StateFormatError::Json(e.to_string()))?;
        let program = parse(&j.program).map_err(|e| StateFormatError::Program(e.to_string()))?;
        let prob = from_text(&j.prob).map_err(|e| StateFormatError::Rational(e.to_string()))?;
        if prob <= Rational::zero() || prob > Rational::one() {
            return Err(StateFormatError::Probability(j.prob));
        }
        Ok(ExecState {
            program: Arc::new(program),
            valuation: Valuation::from_json_map(&j.valuation)?,
            prob,
            history: History::parse(&j.history)?,
        })
    }
}
