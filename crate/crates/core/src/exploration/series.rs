use num_traits::Zero;

use super::{ExploreError, Limits};
use crate::rational::Rational;
use crate::scheduling::Scheduler;
use crate::semantics::{step, ExecState, ProgramState};
use crate::syntax::Program;

/// Lower bound of a runtime series after a finite number of levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuntimeBounds {
    pub lower: Rational,
    /// Present iff `closed`; then equal to `lower`.
    pub exact: Option<Rational>,
    pub closed: bool,
}

/// True when the next step of the state is an `exit` (the state dies on its
/// next step regardless of the scheduler).
pub fn is_exit_pending(program: &Program) -> bool {
    let mut cur = program;
    loop {
        match cur {
            Program::Seq(a, _) => cur = a,
            Program::Exit => return true,
            _ => return false,
        }
    }
}

/// Breadth-first walk of an execution tree that keeps only the current
/// level. A state is absorbed when it hits the target; terminal states that
/// miss the target are stuck and keep contributing their mass forever.
pub struct SeriesWalker<'t> {
    level: Vec<ExecState>,
    stuck: Rational,
    depth: usize,
    lower: Rational,
    absorbed: Rational,
    target: Box<dyn Fn(&ExecState) -> bool + 't>,
    limits: Limits,
    max_live: usize,
}

impl<'t> SeriesWalker<'t> {
    /// Walker whose target is the set of terminal states.
    pub fn termination(start: ExecState, limits: Limits) -> Self {
        Self::with_target(start, Box::new(|s: &ExecState| s.is_terminal()), limits)
    }

    pub fn with_target(start: ExecState, target: Box<dyn Fn(&ExecState) -> bool + 't>, limits: Limits) -> Self {
        let mut w = SeriesWalker {
            level: Vec::new(),
            stuck: Rational::zero(),
            depth: 0,
            lower: Rational::zero(),
            absorbed: Rational::zero(),
            target,
            limits,
            max_live: 0,
        };
        w.admit(vec![start]);
        w
    }

    fn admit(&mut self, states: Vec<ExecState>) {
        for s in states {
            if (self.target)(&s) {
                self.absorbed += &s.prob;
            } else if s.is_terminal() {
                self.stuck += &s.prob;
            } else {
                self.level.push(s);
            }
        }
        let live = self.level.iter().filter(|s| !is_exit_pending(&s.program)).count();
        self.max_live = self.max_live.max(live);
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Mass not yet absorbed at the current depth.
    pub fn alive(&self) -> Rational {
        self.level.iter().fold(self.stuck.clone(), |acc, s| acc + &s.prob)
    }

    /// Mass absorbed within the current depth.
    pub fn absorbed(&self) -> &Rational {
        &self.absorbed
    }

    /// Sum of alive mass over the levels already left behind.
    pub fn lower(&self) -> &Rational {
        &self.lower
    }

    /// Non-absorbed, non-terminal states at the current depth.
    pub fn frontier(&self) -> &[ExecState] {
        &self.level
    }

    /// Largest number of live states at any depth so far, ignoring states
    /// whose next step is an `exit`.
    pub fn max_live_per_depth(&self) -> usize {
        self.max_live
    }

    pub fn is_closed(&self) -> bool {
        self.level.is_empty() && self.stuck.is_zero()
    }

    /// Advances one level.
    pub fn advance(&mut self, f: &mut dyn Scheduler) -> Result<(), ExploreError> {
        self.lower += self.alive();
        let current = std::mem::take(&mut self.level);
        let mut next = Vec::with_capacity(current.len());
        for s in &current {
            for (succ, _) in step(s, f)?.successors {
                next.push(succ);
            }
        }
        self.depth += 1;
        if next.len() > self.limits.node_cap {
            return Err(ExploreError::NodeCap { cap: self.limits.node_cap, depth: self.depth });
        }
        self.admit(next);
        Ok(())
    }

    pub fn advance_to(&mut self, k: usize, f: &mut dyn Scheduler) -> Result<(), ExploreError> {
        while self.depth < k {
            self.advance(f)?;
        }
        Ok(())
    }

    pub fn bounds(&self) -> RuntimeBounds {
        let closed = self.is_closed();
        RuntimeBounds {
            lower: self.lower.clone(),
            exact: closed.then(|| self.lower.clone()),
            closed,
        }
    }
}

/// Probability mass of terminal states reached within `k` steps.
pub fn termination_prob_upto(
    p: &Program,
    f: &mut dyn Scheduler,
    k: usize,
    limits: Limits,
) -> Result<Rational, ExploreError> {
    let mut w = SeriesWalker::termination(ExecState::initial(p), limits);
    w.advance_to(k, f)?;
    Ok(w.absorbed().clone())
}

/// `Σ_{j<k} P(not terminated within j steps)`.
pub fn exp_runtime_bounds(
    p: &Program,
    f: &mut dyn Scheduler,
    k: usize,
    limits: Limits,
) -> Result<RuntimeBounds, ExploreError> {
    exp_runtime_bounds_from(&ExecState::initial(p), f, k, limits)
}

pub fn exp_runtime_bounds_from(
    start: &ExecState,
    f: &mut dyn Scheduler,
    k: usize,
    limits: Limits,
) -> Result<RuntimeBounds, ExploreError> {
    let mut w = SeriesWalker::termination(start.clone(), limits);
    w.advance_to(k, f)?;
    Ok(w.bounds())
}

/// Same series with termination replaced by the first visit to `target`;
/// a hit at step 0 counts.
pub fn exp_reach_runtime_bounds(
    p: &Program,
    f: &mut dyn Scheduler,
    target: &dyn Fn(&ProgramState) -> bool,
    k: usize,
    limits: Limits,
) -> Result<RuntimeBounds, ExploreError> {
    exp_reach_runtime_bounds_from(&ExecState::initial(p), f, target, k, limits)
}

pub fn exp_reach_runtime_bounds_from(
    start: &ExecState,
    f: &mut dyn Scheduler,
    target: &dyn Fn(&ProgramState) -> bool,
    k: usize,
    limits: Limits,
) -> Result<RuntimeBounds, ExploreError> {
    let pred = move |s: &ExecState| target(&s.program_state());
    let mut w = SeriesWalker::with_target(start.clone(), Box::new(pred), limits);
    w.advance_to(k, f)?;
    Ok(w.bounds())
}
