//! Source-to-Knievel transformation: a breadth-first simulator of the source
//! execution tree interleaved with a probability halver.
//!
//! The source program is first compiled to a finite control graph whose
//! edges are exactly the small-step rules (so step counts agree with the
//! interpreter). The output keeps up to `width` frontier states in integer
//! slots, steps every live slot once per round, adds the round's live mass
//! to `kc` (the partial expected-runtime sum) and halves its own survival
//! probability once per simulated source step. Whenever `kc` passes the
//! doubling bound `kb`, it cheers for `cheer * ks` iterations, where `ks` is
//! the inverse of the current survival probability.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Signed};

use super::TransformError;
use crate::rational::Rational;
use crate::semantics::{eval_aexpr, Valuation};
use crate::syntax::{AExpr, BExpr, CmpOp, Program};

/// Control location of a halted (or free) slot.
pub const HALTED: usize = 0;

const MAX_LOCATIONS: usize = 4096;

/// One small-step rule at a control location; targets are locations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Control {
    Goto(usize),
    Assign(String, AExpr, usize),
    Guard(BExpr, usize, usize),
    Prob(Rational, usize, usize),
    Nondet(usize, usize),
}

/// Finite control graph: location `i` (from 1) runs `locations[i - 1]`.
#[derive(Debug, Clone)]
pub struct ControlGraph {
    pub entry: usize,
    pub locations: Vec<Control>,
}

impl ControlGraph {
    pub fn control(&self, loc: usize) -> &Control {
        &self.locations[loc - 1]
    }

    fn successors(&self, loc: usize) -> Vec<usize> {
        match self.control(loc) {
            Control::Goto(t) | Control::Assign(_, _, t) => vec![*t],
            Control::Guard(_, a, b) | Control::Prob(_, a, b) | Control::Nondet(a, b) => vec![*a, *b],
        }
    }
}

type Next = Option<Arc<Program>>;

enum Sym {
    Goto(Next),
    Assign(String, AExpr, Next),
    Guard(BExpr, Next, Next),
    Prob(Rational, Next, Next),
    Nondet(Next, Next),
}

fn reduce(p: &Arc<Program>) -> Result<Sym, TransformError> {
    let empty = || Some(Arc::new(Program::Empty));
    Ok(match p.as_ref() {
        Program::Empty => unreachable!("terminal programs have no control"),
        Program::Skip => Sym::Goto(empty()),
        Program::Exit => Sym::Goto(None),
        Program::Assign(v, e) => Sym::Assign(v.clone(), e.clone(), empty()),
        Program::Seq(first, rest) => {
            if first.is_empty() {
                return Ok(Sym::Goto(Some(Arc::clone(rest))));
            }
            let wrap = |n: Next| n.map(|q| Arc::new(Program::Seq(q, Arc::clone(rest))));
            match reduce(first)? {
                Sym::Goto(a) => Sym::Goto(wrap(a)),
                Sym::Assign(v, e, a) => Sym::Assign(v, e, wrap(a)),
                Sym::Guard(g, a, b) => Sym::Guard(g, wrap(a), wrap(b)),
                Sym::Prob(q, a, b) => Sym::Prob(q, wrap(a), wrap(b)),
                Sym::Nondet(a, b) => Sym::Nondet(wrap(a), wrap(b)),
            }
        }
        Program::ProbChoice(a, pe, b) => {
            if !pe.is_constant() {
                return Err(TransformError::NonConstantProbability(crate::syntax::print_aexpr(pe)));
            }
            let pv = eval_aexpr(pe, &Valuation::new());
            if !pv.is_positive() {
                Sym::Goto(Some(Arc::clone(b)))
            } else if pv >= Rational::one() {
                Sym::Goto(Some(Arc::clone(a)))
            } else {
                Sym::Prob(pv, Some(Arc::clone(a)), Some(Arc::clone(b)))
            }
        }
        Program::NondetChoice(a, b) => Sym::Nondet(Some(Arc::clone(a)), Some(Arc::clone(b))),
        Program::While(g, body) => {
            Sym::Guard(g.clone(), Some(Arc::new(Program::Seq(Arc::clone(body), Arc::clone(p)))), empty())
        }
        Program::If(g, t, e) => Sym::Guard(g.clone(), Some(Arc::clone(t)), Some(Arc::clone(e))),
    })
}

/// Compiles the reachable program terms of `p` into a control graph.
pub fn control_graph(p: &Program) -> Result<ControlGraph, TransformError> {
    let mut ids: HashMap<Arc<Program>, usize> = HashMap::new();
    let mut terms: Vec<Arc<Program>> = Vec::new();
    let mut intern = |n: Next, terms: &mut Vec<Arc<Program>>| -> Result<usize, TransformError> {
        let Some(q) = n else { return Ok(HALTED) };
        if q.is_empty() {
            return Ok(HALTED);
        }
        if let Some(&i) = ids.get(&q) {
            return Ok(i);
        }
        if terms.len() >= MAX_LOCATIONS {
            return Err(TransformError::TooManyLocations(MAX_LOCATIONS));
        }
        terms.push(Arc::clone(&q));
        ids.insert(q, terms.len());
        Ok(terms.len())
    };
    let entry = intern(Some(Arc::new(p.clone())), &mut terms)?;
    let mut locations = Vec::new();
    while locations.len() < terms.len() {
        let term = Arc::clone(&terms[locations.len()]);
        let c = match reduce(&term)? {
            Sym::Goto(a) => Control::Goto(intern(a, &mut terms)?),
            Sym::Assign(v, e, a) => Control::Assign(v, e, intern(a, &mut terms)?),
            Sym::Guard(g, a, b) => Control::Guard(g, intern(a, &mut terms)?, intern(b, &mut terms)?),
            Sym::Prob(q, a, b) => Control::Prob(q, intern(a, &mut terms)?, intern(b, &mut terms)?),
            Sym::Nondet(a, b) => Control::Nondet(intern(a, &mut terms)?, intern(b, &mut terms)?),
        };
        locations.push(c);
    }
    Ok(ControlGraph { entry, locations })
}

/// Frontier width and cheer factor for [`to_knievel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnievelPolicy {
    pub width: usize,
    pub cheer: u64,
}

impl Default for KnievelPolicy {
    fn default() -> Self {
        KnievelPolicy { width: 4, cheer: 16 }
    }
}

/// Most slots a single run can need, or `None` when a probabilistic
/// location sits on a cycle and the frontier is unbounded.
fn required_width(g: &ControlGraph) -> Option<usize> {
    let n = g.locations.len();
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n + 1];
    let mut branching = vec![0u32; n + 1];
    if g.entry == HALTED {
        return Some(1);
    }
    let mut stack: Vec<(usize, usize)> = vec![(g.entry, 0)];
    state[g.entry] = 1;
    while let Some(&mut (v, ref mut i)) = stack.last_mut() {
        let succ = g.successors(v);
        if *i < succ.len() {
            let w = succ[*i];
            *i += 1;
            if w == HALTED {
                continue;
            }
            match state[w] {
                0 => {
                    state[w] = 1;
                    stack.push((w, 0));
                }
                1 if matches!(g.control(w), Control::Prob(..)) || cycle_has_prob(g, &stack, w) => return None,
                _ => {}
            }
        } else {
            stack.pop();
            state[v] = 2;
            let own = u32::from(matches!(g.control(v), Control::Prob(..)));
            let below = succ.iter().filter(|&&w| w != HALTED).map(|&w| branching[w]).max().unwrap_or(0);
            branching[v] = own + below;
        }
    }
    let b = branching[g.entry];
    Some(if b >= usize::BITS - 1 { usize::MAX } else { 1usize << b })
}

fn cycle_has_prob(g: &ControlGraph, stack: &[(usize, usize)], w: usize) -> bool {
    let start = stack.iter().position(|&(v, _)| v == w).unwrap_or(0);
    stack[start..].iter().any(|&(v, _)| matches!(g.control(v), Control::Prob(..)))
}

fn slot_var(i: usize, name: &str) -> String {
    format!("q{i}_{name}")
}

fn source_var(i: usize, name: &str) -> String {
    format!("q{i}_v_{name}")
}

fn rename_a(e: &AExpr, i: usize) -> AExpr {
    match e {
        AExpr::Lit(_) => e.clone(),
        AExpr::Var(v) => AExpr::Var(source_var(i, v)),
        AExpr::Neg(a) => AExpr::Neg(Box::new(rename_a(a, i))),
        AExpr::Bin(op, a, b) => AExpr::Bin(*op, Box::new(rename_a(a, i)), Box::new(rename_a(b, i))),
    }
}

fn rename_b(b: &BExpr, i: usize) -> BExpr {
    match b {
        BExpr::Lit(_) => b.clone(),
        BExpr::Cmp(op, l, r) => BExpr::Cmp(*op, rename_a(l, i), rename_a(r, i)),
        BExpr::Not(a) => BExpr::not(rename_b(a, i)),
        BExpr::And(a, c) => BExpr::and(rename_b(a, i), rename_b(c, i)),
        BExpr::Or(a, c) => BExpr::or(rename_b(a, i), rename_b(c, i)),
    }
}

fn set(v: &str, e: AExpr) -> Program {
    Program::assign(v, e)
}

fn var(v: &str) -> AExpr {
    AExpr::var(v)
}

fn is(v: &str, n: usize) -> BExpr {
    BExpr::cmp(CmpOp::Eq, var(v), AExpr::int(n as i64))
}

fn goto(i: usize, loc: usize) -> Program {
    set(&slot_var(i, "pc"), AExpr::int(loc as i64))
}

/// Copies slot `i` into a free slot taking the right branch; `i` keeps the left.
fn split(i: usize, p: &Rational, left: usize, right: usize, width: usize, vars: &[String]) -> Program {
    let mut out = vec![set("fr", AExpr::int(0))];
    for j in (1..=width).filter(|&j| j != i) {
        out.push(Program::if_then(
            BExpr::and(is(&slot_var(j, "pc"), HALTED), is("fr", 0)),
            set("fr", AExpr::int(j as i64)),
        ));
    }
    // out of slots: record the truncation and stop
    out.push(Program::if_then(is("fr", 0), Program::seq(set("ovf", AExpr::int(1)), Program::Exit)));
    let q = Rational::one() - p;
    for j in (1..=width).filter(|&j| j != i) {
        let mut copy = vec![
            goto(j, right),
            set(&slot_var(j, "pr"), AExpr::mul(var(&slot_var(i, "pr")), AExpr::lit(q.clone()))),
            set(&slot_var(j, "m"), AExpr::int(0)),
        ];
        copy.extend(vars.iter().map(|v| set(&source_var(j, v), var(&source_var(i, v)))));
        out.push(Program::if_then(is("fr", j), Program::seq_all(copy)));
    }
    out.push(set(&slot_var(i, "pr"), AExpr::mul(var(&slot_var(i, "pr")), AExpr::lit(p.clone()))));
    out.push(goto(i, left));
    Program::seq_all(out)
}

fn slot_step(g: &ControlGraph, i: usize, width: usize, vars: &[String]) -> Program {
    let mut cases = vec![set("t", var(&slot_var(i, "pc")))];
    for (idx, c) in g.locations.iter().enumerate() {
        let body = match c {
            Control::Goto(t) => goto(i, *t),
            Control::Assign(v, e, t) => Program::seq(set(&source_var(i, v), rename_a(e, i)), goto(i, *t)),
            Control::Guard(b, t, f) => Program::if_else(rename_b(b, i), goto(i, *t), goto(i, *f)),
            Control::Nondet(a, b) => Program::nondet(goto(i, *a), goto(i, *b)),
            Control::Prob(p, a, b) => split(i, p, *a, *b, width, vars),
        };
        cases.push(Program::if_then(is("t", idx + 1), body));
    }
    // one halving per simulated source step
    cases.push(Program::halt_with(AExpr::lit(crate::rational::ratio(1, 2))));
    cases.push(set("ks", AExpr::mul(AExpr::int(2), var("ks"))));
    Program::if_then(is(&slot_var(i, "m"), 1), Program::seq_all(cases))
}

/// Transforms `p` into Knievel form. Probabilities in `p` must be constant.
pub fn to_knievel(p: &Program, policy: KnievelPolicy) -> Result<Program, TransformError> {
    if policy.width == 0 {
        return Err(TransformError::BadPolicy("width must be positive".into()));
    }
    if policy.cheer == 0 {
        return Err(TransformError::BadPolicy("cheer factor must be positive".into()));
    }
    let g = control_graph(p)?;
    if let Some(needed) = required_width(&g) {
        if needed > policy.width {
            return Err(TransformError::WidthExceeded { needed, width: policy.width });
        }
    }
    let vars: Vec<String> = p.variables().into_iter().collect();
    let w = policy.width;

    let mut init = vec![
        goto(1, g.entry),
        set(&slot_var(1, "pr"), AExpr::int(1)),
        set("kc", AExpr::int(0)),
        set("kb", AExpr::int(1)),
        set("ks", AExpr::int(1)),
        set("run", AExpr::int(1)),
    ];

    let mut round = vec![set("al", AExpr::int(0))];
    for i in 1..=w {
        round.push(Program::if_else(
            is(&slot_var(i, "pc"), HALTED),
            set(&slot_var(i, "m"), AExpr::int(0)),
            Program::seq(
                set(&slot_var(i, "m"), AExpr::int(1)),
                set("al", AExpr::add(var("al"), var(&slot_var(i, "pr")))),
            ),
        ));
    }
    let countdown = Program::while_loop(
        BExpr::cmp(CmpOp::Gt, var("c"), AExpr::int(0)),
        set("c", AExpr::sub(var("c"), AExpr::int(1))),
    );
    let cheer = Program::while_loop(
        BExpr::cmp(CmpOp::Gt, var("kc"), var("kb")),
        Program::seq_all([
            set("kb", AExpr::mul(AExpr::int(2), var("kb"))),
            set("c", AExpr::mul(AExpr::int(policy.cheer as i64), var("ks"))),
            countdown,
        ]),
    );
    let mut live = vec![set("kc", AExpr::add(var("kc"), var("al"))), cheer];
    live.extend((1..=w).map(|i| slot_step(&g, i, w, &vars)));
    round.push(Program::if_else(is("al", 0), set("run", AExpr::int(0)), Program::seq_all(live)));

    init.push(Program::while_loop(is("run", 1), Program::seq_all(round)));
    Ok(Program::seq_all(init))
}
