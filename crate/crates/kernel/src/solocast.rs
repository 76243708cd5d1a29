//! Doubling broadcast: one edge-internal broadcast realized as a sequence of
//! legal unicast rounds.

use thiserror::Error;

use hypersim_core::combin::ceil_log2;
use hypersim_core::VertexId;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolocastError {
    #[error("source {0} is not a member of the edge")]
    SourceNotMember(usize),
    #[error("edge must have at least 2 members, got {0}")]
    EdgeTooSmall(usize),
}

/// Per-round (sender, receiver) pairs; all members hold the payload after
/// the last round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolocastSchedule {
    pub rounds: Vec<Vec<(VertexId, VertexId)>>,
}

impl SolocastSchedule {
    pub fn round_count(&self) -> usize {
        self.rounds.len()
    }
}

/// Builds the doubling schedule for broadcasting from `src` to the whole
/// edge. Members are ranked with `src` at rank 0 and the rest in ascending
/// ID order; in round `t` every holder of rank `i < 2^(t-1)` sends to rank
/// `i + 2^(t-1)`. All `|e| - 1` recipients hold the payload after
/// `ceil(log2 |e|)` rounds, and each round is a legal EU round.
pub fn solocast_over_unicast(
    members: &[VertexId],
    src: VertexId,
) -> Result<SolocastSchedule, SolocastError> {
    if members.len() < 2 {
        return Err(SolocastError::EdgeTooSmall(members.len()));
    }
    if !members.contains(&src) {
        return Err(SolocastError::SourceNotMember(src.idx()));
    }
    let ranks = rank_members(members, src);
    let k = ranks.len();
    let total = ceil_log2(k) as usize;
    let mut rounds = Vec::with_capacity(total);
    for t in 1..=total {
        let half = 1usize << (t - 1);
        let mut sends = Vec::new();
        for i in 0..half.min(k) {
            let j = i + half;
            if j < k {
                sends.push((ranks[i], ranks[j]));
            }
        }
        rounds.push(sends);
    }
    Ok(SolocastSchedule { rounds })
}

/// Rank order used by the schedule: source first, then the remaining members
/// ascending.
pub fn rank_members(members: &[VertexId], src: VertexId) -> Vec<VertexId> {
    let mut ranks = Vec::with_capacity(members.len());
    ranks.push(src);
    let mut rest: Vec<VertexId> = members.iter().copied().filter(|&v| v != src).collect();
    rest.sort_unstable();
    ranks.extend(rest);
    ranks
}
