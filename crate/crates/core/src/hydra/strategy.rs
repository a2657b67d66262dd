use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{HydraError, HydraState, NodeId};

/// Rounds covered by the seeded table of a random strategy.
pub const RANDOM_TABLE_LEN: usize = 64;
/// Table entries are drawn from `0..RANDOM_RANGE`.
pub const RANDOM_RANGE: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HerculesStrategy {
    /// First head in canonical order: deepest, then largest sibling group,
    /// then leftmost.
    LeftmostDeepest,
    /// Seeded pseudo-random choice; after the table runs out it falls back
    /// to leftmost-deepest.
    Random(u64),
    /// Explicit node id per round.
    Scripted(Vec<NodeId>),
}

/// Heads ordered by depth (descending), the parent's child count
/// (descending) and pre-order position.
pub fn canonical_heads(h: &HydraState) -> Vec<NodeId> {
    let order = h.preorder();
    let mut depth = vec![0usize; order.iter().max().map_or(0, |m| m + 1)];
    for &v in &order {
        if let Some(p) = h.parent(v) {
            depth[v] = depth[p] + 1;
        }
    }
    let mut heads: Vec<(usize, NodeId)> = order
        .iter()
        .enumerate()
        .filter(|(_, &v)| h.is_head(v))
        .map(|(i, &v)| (i, v))
        .collect();
    heads.sort_by_key(|&(i, v)| {
        let siblings = h.child_count(h.parent(v).expect("head has a parent"));
        (std::cmp::Reverse(depth[v]), std::cmp::Reverse(siblings), i)
    });
    heads.into_iter().map(|(_, v)| v).collect()
}

pub fn random_table(seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..RANDOM_TABLE_LEN).map(|_| rng.gen_range(0..RANDOM_RANGE)).collect()
}

/// Hercules's choice in round `round` (0-based).
pub fn hercules_choose(h: &HydraState, strategy: &HerculesStrategy, round: usize) -> Result<NodeId, HydraError> {
    let heads = canonical_heads(h);
    if heads.is_empty() {
        return Err(HydraError::Dead);
    }
    match strategy {
        HerculesStrategy::LeftmostDeepest => Ok(heads[0]),
        HerculesStrategy::Random(seed) => {
            let table = random_table(*seed);
            match table.get(round) {
                Some(&u) => Ok(heads[u as usize % heads.len()]),
                None => Ok(heads[0]),
            }
        }
        HerculesStrategy::Scripted(ids) => {
            let id = *ids.get(round).ok_or(HydraError::ScriptExhausted(round))?;
            if h.is_head(id) {
                Ok(id)
            } else {
                Err(HydraError::NotAHead(id))
            }
        }
    }
}
