//! Valuations, execution states and the small-step transition relation.

mod state;

pub use state::{
    decode_history, encode_history, Direction, ExecState, History, HistoryParseError, ProgramState,
    StateFormatError, Valuation,
};

use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;
use crate::scheduling::{Scheduler, SchedulerError, SiteId};
use crate::syntax::{AExpr, ArithOp, BExpr, CmpOp, Program};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("cannot step a terminal state")]
    Terminal,
    #[error("scheduler failed: {0}")]
    Scheduler(#[from] SchedulerError),
    #[error("scheduler returned probabilistic direction {0} for a nondeterministic choice")]
    InvalidDecision(Direction),
}

pub fn eval_aexpr(e: &AExpr, env: &Valuation) -> Rational {
    match e {
        AExpr::Lit(r) => r.clone(),
        AExpr::Var(v) => env.get(v),
        AExpr::Neg(a) => -eval_aexpr(a, env),
        AExpr::Bin(op, a, b) => {
            let (x, y) = (eval_aexpr(a, env), eval_aexpr(b, env));
            match op {
                ArithOp::Add => x + y,
                ArithOp::Sub => x - y,
                ArithOp::Mul => x * y,
            }
        }
    }
}

pub fn eval_bexpr(b: &BExpr, env: &Valuation) -> bool {
    match b {
        BExpr::Lit(v) => *v,
        BExpr::Cmp(op, l, r) => {
            let (x, y) = (eval_aexpr(l, env), eval_aexpr(r, env));
            match op {
                CmpOp::Eq => x == y,
                CmpOp::Ne => x != y,
                CmpOp::Lt => x < y,
                CmpOp::Le => x <= y,
                CmpOp::Gt => x > y,
                CmpOp::Ge => x >= y,
            }
        }
        BExpr::Not(a) => !eval_bexpr(a, env),
        BExpr::And(a, b) => eval_bexpr(a, env) && eval_bexpr(b, env),
        BExpr::Or(a, b) => eval_bexpr(a, env) || eval_bexpr(b, env),
    }
}

/// Identifies a nondeterministic choice by its syntax. Stable across runs.
pub fn site_of(node: &Program) -> SiteId {
    #[allow(deprecated)]
    let mut h = std::hash::SipHasher::new();
    node.hash(&mut h);
    h.finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    Deterministic,
    ProbLeft,
    ProbRight,
    Nondet,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::Deterministic => "deterministic",
            StepKind::ProbLeft => "prob-left",
            StepKind::ProbRight => "prob-right",
            StepKind::Nondet => "nondet",
        }
    }
}

/// How a scheduler-free transition was produced.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Label {
    Det,
    /// Proper probabilistic branch carrying its weight.
    ProbLeft(Rational),
    ProbRight(Rational),
    /// Forced branch of a choice whose probability is at most 0 or at least 1.
    ForcedLeft,
    ForcedRight,
    NondetLeft(SiteId),
    NondetRight(SiteId),
}

impl Label {
    pub fn direction(&self) -> Option<Direction> {
        match self {
            Label::Det => None,
            Label::ProbLeft(_) | Label::ForcedLeft => Some(Direction::Lp),
            Label::ProbRight(_) | Label::ForcedRight => Some(Direction::Rp),
            Label::NondetLeft(_) => Some(Direction::Ln),
            Label::NondetRight(_) => Some(Direction::Rn),
        }
    }

    pub fn weight(&self) -> Rational {
        match self {
            Label::ProbLeft(p) | Label::ProbRight(p) => p.clone(),
            _ => Rational::one(),
        }
    }

    pub fn kind(&self) -> StepKind {
        match self {
            Label::Det => StepKind::Deterministic,
            Label::ProbLeft(_) | Label::ForcedLeft => StepKind::ProbLeft,
            Label::ProbRight(_) | Label::ForcedRight => StepKind::ProbRight,
            Label::NondetLeft(_) | Label::NondetRight(_) => StepKind::Nondet,
        }
    }
}

/// One scheduler-free successor of a program state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub target: ProgramState,
    pub label: Label,
}

enum Next {
    Prog(Arc<Program>),
    Halt,
}

fn reduce(p: &Arc<Program>, env: &Valuation) -> Vec<(Next, Valuation, Label)> {
    let det = |n: Next, env: Valuation| vec![(n, env, Label::Det)];
    let prog = |q: &Arc<Program>| Next::Prog(Arc::clone(q));
    match p.as_ref() {
        Program::Empty => Vec::new(),
        Program::Skip => det(Next::Prog(Arc::new(Program::Empty)), env.clone()),
        Program::Exit => det(Next::Halt, env.clone()),
        Program::Assign(v, e) => {
            let val = eval_aexpr(e, env);
            det(Next::Prog(Arc::new(Program::Empty)), env.set(v, val))
        }
        Program::Seq(first, rest) => {
            if first.is_empty() {
                return det(prog(rest), env.clone());
            }
            reduce(first, env)
                .into_iter()
                .map(|(n, e, l)| {
                    let n = match n {
                        Next::Prog(q) => Next::Prog(Arc::new(Program::Seq(q, Arc::clone(rest)))),
                        Next::Halt => Next::Halt,
                    };
                    (n, e, l)
                })
                .collect()
        }
        Program::ProbChoice(a, pe, b) => {
            let pv = eval_aexpr(pe, env);
            if !pv.is_positive() {
                vec![(prog(b), env.clone(), Label::ForcedRight)]
            } else if pv >= Rational::one() {
                vec![(prog(a), env.clone(), Label::ForcedLeft)]
            } else {
                let q = Rational::one() - &pv;
                vec![
                    (prog(a), env.clone(), Label::ProbLeft(pv)),
                    (prog(b), env.clone(), Label::ProbRight(q)),
                ]
            }
        }
        Program::NondetChoice(a, b) => {
            let site = site_of(p);
            vec![
                (prog(a), env.clone(), Label::NondetLeft(site)),
                (prog(b), env.clone(), Label::NondetRight(site)),
            ]
        }
        Program::While(g, body) => {
            if eval_bexpr(g, env) {
                det(Next::Prog(Arc::new(Program::Seq(Arc::clone(body), Arc::clone(p)))), env.clone())
            } else {
                det(Next::Prog(Arc::new(Program::Empty)), env.clone())
            }
        }
        Program::If(g, then, other) => {
            let branch = if eval_bexpr(g, env) { then } else { other };
            det(prog(branch), env.clone())
        }
    }
}

/// All successors of a program state, with both arms of every
/// nondeterministic choice. Empty for terminal states.
pub fn transitions(s: &ProgramState) -> Vec<Transition> {
    reduce(&s.program, &s.valuation)
        .into_iter()
        .map(|(n, env, label)| {
            let program = match n {
                Next::Prog(q) => q,
                Next::Halt => Arc::new(Program::Empty),
            };
            Transition { target: ProgramState { program, valuation: env }, label }
        })
        .collect()
}

/// Successors of a single step, each tagged with the rule family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub successors: Vec<(ExecState, StepKind)>,
}

/// Applies one inference rule. Nondeterministic choices consult `f` with the
/// current history.
pub fn step(s: &ExecState, f: &mut dyn Scheduler) -> Result<StepOutcome, StepError> {
    if s.is_terminal() {
        return Err(StepError::Terminal);
    }
    let mut ts = transitions(&s.program_state());
    if let Some(Transition { label: Label::NondetLeft(site), .. }) = ts.first() {
        let site = *site;
        let dir = f.decide(s.history.as_slice(), site)?;
        let idx = match dir {
            Direction::Ln => 0,
            Direction::Rn => 1,
            other => return Err(StepError::InvalidDecision(other)),
        };
        ts = vec![ts.swap_remove(idx)];
    }
    let successors = ts
        .into_iter()
        .map(|t| {
            let kind = t.label.kind();
            let prob = if let Label::ProbLeft(w) | Label::ProbRight(w) = &t.label {
                &s.prob * w
            } else {
                s.prob.clone()
            };
            let history = match t.label.direction() {
                Some(d) => s.history.extended(d),
                None => s.history.clone(),
            };
            let state = ExecState {
                program: t.target.program,
                valuation: t.target.valuation,
                prob,
                history,
            };
            (state, kind)
        })
        .collect();
    Ok(StepOutcome { successors })
}

/// Convenience check used by tests: probabilities of a step sum to the parent's.
pub fn conserves(parent: &ExecState, out: &StepOutcome) -> bool {
    let total = out.successors.iter().fold(Rational::zero(), |acc, (s, _)| acc + &s.prob);
    total == parent.prob
}
