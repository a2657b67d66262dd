use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Scheduler, SchedulerError, SiteId};
use crate::semantics::{decode_history, encode_history, Direction};

/// Finite scheduler table over histories of length at most `size`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartialSchedule {
    pub size: usize,
    pub table: BTreeMap<Vec<Direction>, Direction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleFormatError {
    #[error("invalid schedule JSON: {0}")]
    Json(String),
    #[error("invalid history key: {0}")]
    History(String),
    #[error("table value must be Ln or Rn, got `{0}`")]
    Value(String),
    #[error("history `{0}` is longer than the schedule size {1}")]
    TooLong(String, usize),
}

#[derive(Serialize, Deserialize)]
struct PartialScheduleJson {
    size: usize,
    table: BTreeMap<String, String>,
}

impl PartialSchedule {
    pub fn new(size: usize) -> Self {
        PartialSchedule { size, table: BTreeMap::new() }
    }

    pub fn with(mut self, history: &[Direction], d: Direction) -> Self {
        self.table.insert(history.to_vec(), d);
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = PartialScheduleJson {
            size: self.size,
            table: self
                .table
                .iter()
                .map(|(k, v)| (encode_history(k), v.code().to_string()))
                .collect(),
        };
        serde_json::to_value(j).expect("plain struct serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, ScheduleFormatError> {
        let j: PartialScheduleJson =
            serde_json::from_str(s).map_err(|e| ScheduleFormatError::Json(e.to_string()))?;
        let mut table = BTreeMap::new();
        for (k, v) in j.table {
            let h = decode_history(&k).map_err(|e| ScheduleFormatError::History(e.to_string()))?;
            if h.len() > j.size {
                return Err(ScheduleFormatError::TooLong(k, j.size));
            }
            let d = Direction::from_code(&v)
                .filter(|d| d.is_nondet())
                .ok_or(ScheduleFormatError::Value(v))?;
            table.insert(h, d);
        }
        Ok(PartialSchedule { size: j.size, table })
    }
}

/// Total scheduler agreeing with a partial schedule on its domain and
/// answering `Ln` everywhere else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardExtension {
    pub schedule: PartialSchedule,
}

pub fn standard_extension(ps: PartialSchedule) -> StandardExtension {
    StandardExtension { schedule: ps }
}

impl Scheduler for StandardExtension {
    fn decide(&mut self, history: &[Direction], _: SiteId) -> Result<Direction, SchedulerError> {
        if history.len() <= self.schedule.size {
            if let Some(d) = self.schedule.table.get(history) {
                return Ok(*d);
            }
        }
        Ok(Direction::Ln)
    }
}

/// Lazily yields one schedule per assignment of directions to the given
/// query histories, in binary counting order.
pub struct PartialScheduleIter {
    size: usize,
    queries: Vec<Vec<Direction>>,
    next: Option<u128>,
    total: u128,
}

impl PartialScheduleIter {
    pub fn total(&self) -> u128 {
        self.total
    }
}

impl Iterator for PartialScheduleIter {
    type Item = PartialSchedule;

    fn next(&mut self) -> Option<PartialSchedule> {
        let mask = self.next?;
        self.next = if mask + 1 < self.total { Some(mask + 1) } else { None };
        let table = self
            .queries
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let d = if (mask >> i) & 1 == 1 { Direction::Rn } else { Direction::Ln };
                (h.clone(), d)
            })
            .collect();
        Some(PartialSchedule { size: self.size, table })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("enumeration too large: {queries} reachable decision points exceed the cap of {cap}")]
pub struct EnumerationTooLarge {
    pub queries: usize,
    pub cap: usize,
}

/// Schedules over the supplied reachable query histories. Refuses when the
/// number of queries exceeds `query_cap` (the count is `2^queries`).
pub fn enumerate_partial_schedules(
    m: usize,
    histories: &[Vec<Direction>],
    query_cap: usize,
) -> Result<PartialScheduleIter, EnumerationTooLarge> {
    let mut queries: Vec<Vec<Direction>> =
        histories.iter().filter(|h| h.len() <= m).cloned().collect();
    queries.sort();
    queries.dedup();
    let cap = query_cap.min(100);
    if queries.len() > cap {
        return Err(EnumerationTooLarge { queries: queries.len(), cap });
    }
    let total = 1u128 << queries.len();
    Ok(PartialScheduleIter { size: m, queries, next: Some(0), total })
}
