//! Schedulers resolving nondeterministic choices from decision histories.

mod partial;

pub use partial::{
    enumerate_partial_schedules, standard_extension, EnumerationTooLarge, PartialSchedule,
    PartialScheduleIter,
    ScheduleFormatError, StandardExtension,
};

use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::io::{BufRead, Write};

use thiserror::Error;

use crate::semantics::{encode_history as encode, Direction};

/// Identifies a nondeterministic choice site (see `semantics::site_of`).
pub type SiteId = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchedulerError {
    #[error("scheduler aborted: end of input")]
    Aborted,
    #[error("scheduler I/O error: {0}")]
    Io(String),
}

/// Resolves a nondeterministic choice. Must answer `Ln` or `Rn`.
pub trait Scheduler {
    fn decide(&mut self, history: &[Direction], site: SiteId) -> Result<Direction, SchedulerError>;
}

impl<S: Scheduler + ?Sized> Scheduler for Box<S> {
    fn decide(&mut self, history: &[Direction], site: SiteId) -> Result<Direction, SchedulerError> {
        (**self).decide(history, site)
    }
}

impl<S: Scheduler + ?Sized> Scheduler for &mut S {
    fn decide(&mut self, history: &[Direction], site: SiteId) -> Result<Direction, SchedulerError> {
        (**self).decide(history, site)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constant(pub Direction);

pub fn constant(d: Direction) -> Constant {
    assert!(d.is_nondet(), "constant scheduler needs Ln or Rn");
    Constant(d)
}

impl Scheduler for Constant {
    fn decide(&mut self, _: &[Direction], _: SiteId) -> Result<Direction, SchedulerError> {
        Ok(self.0)
    }
}

/// Scheduler backed by a pure function of the history.
pub struct FromFn<F>(pub F);

pub fn from_function<F: Fn(&[Direction]) -> Direction>(g: F) -> FromFn<F> {
    FromFn(g)
}

impl<F: Fn(&[Direction]) -> Direction> Scheduler for FromFn<F> {
    fn decide(&mut self, history: &[Direction], _: SiteId) -> Result<Direction, SchedulerError> {
        Ok((self.0)(history))
    }
}

/// `Ln` iff the history has even length.
pub fn parity() -> FromFn<fn(&[Direction]) -> Direction> {
    fn par(h: &[Direction]) -> Direction {
        if h.len() % 2 == 0 {
            Direction::Ln
        } else {
            Direction::Rn
        }
    }
    FromFn(par as fn(&[Direction]) -> Direction)
}

/// Pseudo-random but history-deterministic scheduler: the answer is a hash
/// of the seed and the history, so replays agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hashed {
    pub seed: u64,
}

pub fn hashed(seed: u64) -> Hashed {
    Hashed { seed }
}

impl Scheduler for Hashed {
    fn decide(&mut self, history: &[Direction], _: SiteId) -> Result<Direction, SchedulerError> {
        #[allow(deprecated)]
        let mut h = std::hash::SipHasher::new_with_keys(self.seed, 0x9e37_79b9_7f4a_7c15);
        history.hash(&mut h);
        Ok(if h.finish() & 1 == 0 { Direction::Ln } else { Direction::Rn })
    }
}

/// Wrapper that never lets one direction be ignored more than `k`
/// consecutive times at the same choice site along a path.
pub struct BoundedScheduler<S> {
    inner: S,
    k: usize,
    // Counter snapshot keyed by the history right after each decision.
    snapshots: HashMap<Vec<Direction>, HashMap<SiteId, (Direction, usize)>>,
}

pub fn bound<S: Scheduler>(inner: S, k: usize) -> BoundedScheduler<S> {
    assert!(k >= 1, "bound requires k >= 1");
    BoundedScheduler { inner, k, snapshots: HashMap::new() }
}

impl<S> BoundedScheduler<S> {
    pub fn k(&self) -> usize {
        self.k
    }

    fn counters_for(&self, history: &[Direction]) -> HashMap<SiteId, (Direction, usize)> {
        for len in (1..=history.len()).rev() {
            if !history[len - 1].is_nondet() {
                continue;
            }
            if let Some(c) = self.snapshots.get(&history[..len]) {
                return c.clone();
            }
        }
        HashMap::new()
    }
}

fn opposite(d: Direction) -> Direction {
    match d {
        Direction::Ln => Direction::Rn,
        Direction::Rn => Direction::Ln,
        other => other,
    }
}

impl<S: Scheduler> Scheduler for BoundedScheduler<S> {
    fn decide(&mut self, history: &[Direction], site: SiteId) -> Result<Direction, SchedulerError> {
        let mut counters = self.counters_for(history);
        let proposed = self.inner.decide(history, site)?;
        let choice = match counters.get(&site) {
            Some(&(last, run)) if last == proposed && run >= self.k => opposite(proposed),
            _ => proposed,
        };
        let run = match counters.get(&site) {
            Some(&(last, run)) if last == choice => run + 1,
            _ => 1,
        };
        counters.insert(site, (choice, run));
        let mut key = history.to_vec();
        key.push(choice);
        self.snapshots.insert(key, counters);
        Ok(choice)
    }
}

/// Prompts on `output` and reads `l`/`r` answers from `input`. Answers are
/// memoized per history so replays are consistent.
pub struct Interactive<R, W> {
    input: R,
    output: W,
    memo: HashMap<Vec<Direction>, Direction>,
}

pub fn interactive() -> Interactive<std::io::BufReader<std::io::Stdin>, std::io::Stderr> {
    Interactive::new(std::io::BufReader::new(std::io::stdin()), std::io::stderr())
}

impl<R: BufRead, W: Write> Interactive<R, W> {
    pub fn new(input: R, output: W) -> Self {
        Interactive { input, output, memo: HashMap::new() }
    }
}

impl<R: BufRead, W: Write> Scheduler for Interactive<R, W> {
    fn decide(&mut self, history: &[Direction], site: SiteId) -> Result<Direction, SchedulerError> {
        if let Some(d) = self.memo.get(history) {
            return Ok(*d);
        }
        let io = |e: std::io::Error| SchedulerError::Io(e.to_string());
        loop {
            write!(self.output, "choice at history '{}' (site {site:016x}) [l/r]: ", encode(history))
                .map_err(io)?;
            self.output.flush().map_err(io)?;
            let mut line = String::new();
            if self.input.read_line(&mut line).map_err(io)? == 0 {
                return Err(SchedulerError::Aborted);
            }
            let d = match line.trim() {
                "l" | "L" | "Ln" | "left" => Direction::Ln,
                "r" | "R" | "Rn" | "right" => Direction::Rn,
                _ => {
                    writeln!(self.output, "please answer l or r").map_err(io)?;
                    continue;
                }
            };
            self.memo.insert(history.to_vec(), d);
            return Ok(d);
        }
    }
}
