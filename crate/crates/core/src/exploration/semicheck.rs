use rayon::prelude::*;

use super::{termination_prob_upto, ExploreError, Limits};
use crate::rational::Rational;
use crate::scheduling::{enumerate_partial_schedules, standard_extension, PartialScheduleIter};
use crate::semantics::{transitions, Direction, ExecState, Label};
use crate::syntax::Program;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SemicheckConfig {
    pub limits: Limits,
    /// Maximum number of reachable decision points (schedules = 2^points).
    pub query_cap: usize,
    /// Worker threads; 1 runs sequentially.
    pub jobs: usize,
}

impl Default for SemicheckConfig {
    fn default() -> Self {
        SemicheckConfig { limits: Limits::default(), query_cap: 16, jobs: 1 }
    }
}

/// Histories at which some scheduler is asked a question within the first
/// `n` steps, over the tree where every nondeterministic choice is expanded.
pub fn reachable_queries(p: &Program, n: usize, limits: Limits) -> Result<Vec<Vec<Direction>>, ExploreError> {
    let mut queries = Vec::new();
    let mut level = vec![ExecState::initial(p)];
    for depth in 0..n {
        let mut next = Vec::new();
        for s in &level {
            if s.is_terminal() {
                continue;
            }
            let ts = transitions(&s.program_state());
            if matches!(ts.first().map(|t| &t.label), Some(Label::NondetLeft(_))) {
                queries.push(s.history.as_slice().to_vec());
            }
            for t in ts {
                let prob = if let Label::ProbLeft(w) | Label::ProbRight(w) = &t.label { &s.prob * w } else { s.prob.clone() };
                let history = match t.label.direction() {
                    Some(d) => s.history.extended(d),
                    None => s.history.clone(),
                };
                next.push(ExecState { program: t.target.program, valuation: t.target.valuation, prob, history });
            }
        }
        if next.len() > limits.node_cap {
            return Err(ExploreError::NodeCap { cap: limits.node_cap, depth: depth + 1 });
        }
        level = next;
    }
    Ok(queries)
}

fn schedules(p: &Program, n: usize, cfg: &SemicheckConfig) -> Result<PartialScheduleIter, ExploreError> {
    let queries = reachable_queries(p, n, cfg.limits)?;
    Ok(enumerate_partial_schedules(n, &queries, cfg.query_cap)?)
}

/// True iff every partial schedule of depth `n` terminates with probability
/// strictly greater than `delta` within `n` steps. Stops at the first
/// failing schedule.
pub fn ast_semicheck(p: &Program, delta: &Rational, n: usize, cfg: &SemicheckConfig) -> Result<bool, ExploreError> {
    use num_traits::{One, Zero};
    if *delta <= Rational::zero() || *delta >= Rational::one() {
        return Err(ExploreError::BadDelta);
    }
    let iter = schedules(p, n, cfg)?;
    let check = |ps| -> Result<bool, ExploreError> {
        let mut f = standard_extension(ps);
        Ok(termination_prob_upto(p, &mut f, n, cfg.limits)? > *delta)
    };
    if cfg.jobs <= 1 {
        for ps in iter {
            if !check(ps)? {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| ExploreError::Pool(e.to_string()))?;
    pool.install(|| {
        // A failing schedule short-circuits the search via Err(None).
        let r = iter.par_bridge().try_for_each(|ps| match check(ps) {
            Ok(true) => Ok(()),
            Ok(false) => Err(None),
            Err(e) => Err(Some(e)),
        });
        match r {
            Ok(()) => Ok(true),
            Err(None) => Ok(false),
            Err(Some(e)) => Err(e),
        }
    })
}

/// Smallest `n ≤ max_n` for which `ast_semicheck` succeeds, if any.
pub fn ast_search(
    p: &Program,
    delta: &Rational,
    max_n: usize,
    cfg: &SemicheckConfig,
) -> Result<Option<usize>, ExploreError> {
    for n in 0..=max_n {
        if ast_semicheck(p, delta, n, cfg)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}
